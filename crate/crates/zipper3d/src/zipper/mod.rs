//! Zippers, addresses, linear parametrization and the quantities derived
//! from the ratio vector.

mod collage;
mod io;
mod ops;
mod types;

pub use collage::{collage_b1, collage_b2, CollageBound};
pub use io::{MapDoc, ZipperDoc};
pub use ops::{
    address_of, cylinder_map, diameter_bound, eval_address, holder_critical_index, holder_exponent,
    holder_exponent_from_ratios, parametrize, parametrize_in, refine, root_ball,
    similarity_dimension, validate, ValidationReport,
};
pub use types::{Address, LinearZipper, Polyline, Signature, Zipper};
pub(crate) use ops::cylinder_map_unchecked;
