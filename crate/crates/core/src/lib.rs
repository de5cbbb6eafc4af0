//! Exact computations for quadratic birational maps of the plane that fix
//! three concurrent lines, their actions on Picard lattices, and the
//! Coxeter-group and Salem-number facts around them.

pub mod coxeter;
pub mod cubic;
pub mod diller;
pub mod groupengine;
pub mod exactnum;
pub mod perm;
pub mod picard;
pub mod planemaps;
pub mod realize;
pub mod salem;
