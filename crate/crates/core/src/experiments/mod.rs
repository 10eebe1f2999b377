pub mod field;
pub mod haroche;
pub mod homodyne;
pub mod number;
pub mod params;
pub mod ramsey;
pub mod simulate;
