//! Permutation groups, symmetric group characters and generalized matrix
//! functions `d_χ^G(X) = Σ_{σ∈G} χ(σ) Π_i X[i][σ(i)]`.

mod character;
mod function;
mod partition;
mod permanent;
mod permutation;
pub mod scalar;
mod table;

pub use character::{class_size, mn_character, CharacterSpec};
pub use function::{
    determinant, elementary_symmetric_det, enumerate_group, generalized_matrix_function, GroupSpec,
    PreparedFunction, MAX_GROUP_ORDER,
};
pub use partition::{partitions_of, CycleType, Partition};
pub use permanent::{permanent_oracle, MAX_PERMANENT_DIM};
pub use permutation::Permutation;
pub use table::{read_character_table, read_character_table_file, CharacterTable};
