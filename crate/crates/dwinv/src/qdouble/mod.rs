//! The braided category of graded unitary `G`-modules (modules over the quantum double),
//! its simple objects, fusion data, block transport and rotation.

mod category;
mod module;
#[cfg(test)]
mod tests;

pub use category::{average_map, rot_labels, Beta, BlockJson, BlockMatrix, Category, FUSION_TOL};
pub use module::{
    braiding, braiding_inverse, cap, convolve_characters, cup, equivariance_defect, grade_defect, rot,
    rot_categorical, scalar, tensor_all, vector_trace, GradedModule, Morphism, Obj, ObjLabel,
};
