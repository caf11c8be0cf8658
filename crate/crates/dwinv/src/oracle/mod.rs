//! Brute-force ground truth: Fox colorings by Smith normal form or enumeration, and
//! homomorphism counts from Wirtinger presentations.

mod diagram;
mod fox;
mod snf;
mod wirtinger;

pub use diagram::{fixtures, Crossing, LinkDiagram};
pub use fox::{coloring_matrix, fox_count, fox_count_exhaustive};
pub use snf::{determinant, smith_normal_form, Snf};
pub use wirtinger::{boundary_count, hom_count, wirtinger_presentation, Letter, WirtingerPresentation, SEARCH_GUARD};
