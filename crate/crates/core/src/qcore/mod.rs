//! Dense states and operators on small composite spaces, plus a truncated
//! bosonic mode.

pub mod expm;
pub mod fock;
pub mod linalg;
pub mod ops;
pub mod random;
pub mod space;
pub mod state;

pub use expm::expm;
pub use fock::{coherent_state, displacement_operator, number_phase_operator, FockSpace};
pub use ops::{partial_trace, partial_transpose, partial_transpose_set};
pub use space::CompositeSpace;
pub use state::{DensityMatrix, Operator, PureState, Tensor};
