pub mod algebra;
pub mod curve;
pub mod exec;
pub mod threefold;
pub mod divisor;
pub mod ring;
pub mod picard;
pub mod report;
