//! Exact computations with forms, Witt groups, L-groups and the
//! Grothendieck-Witt groups of the integers.
//!
//! Everything is exact: integers are `BigInt`, rationals are `BigRational`,
//! and finite fields carry their modulus at run time through a [`ring::Ring`]
//! context object.

pub mod abelian;
pub mod arith;
pub mod error;
pub mod linalg;
pub mod ring;
pub mod forms;
pub mod witt;
pub mod lattice;
pub mod bernoulli;
pub mod tables;

pub use abelian::{cokernel_group, direct_sum, exact_order_check, group_order, smith_normal_form, FgAbelianGroup};
pub use bernoulli::{bernoulli_number, c_numerator, k_group_z, von_staudt_checks, w_denominator, BernoulliTable};
pub use error::{Error, Result};
pub use forms::{AnyForm, CoefficientDomain, LagrangianSearch, QuadForm, SymBilForm};
pub use lattice::{devissage_class, dual_lattice, is_integral_lattice, torsion_linking_form, RationalLattice, TorsionLinkingForm};
pub use linalg::{IntMatrix, Matrix, RatMatrix};
pub use ring::{GaloisField, Integers, IntegersMod, Rationals};
pub use tables::{gw_group_z, l_genuine_symmetric_z, l_group, normal_cofibre, render_table, DedekindDescriptor, GwFlavor, LFlavor};
pub use witt::{
    hasse_invariant, hilbert_symbol, integral_kernel_order, second_residue, witt_class, witt_group_structure, witt_q_decompose, FieldDesc,
    Place, WittClass,
};

pub type RationalForm = SymBilForm<Rationals>;
pub type IntegerForm = SymBilForm<Integers>;
pub type FiniteFieldForm = SymBilForm<GaloisField>;
