//! Constructors for new semiring instances: direct products, modulo rings,
//! fields of fractions, downset lattices of finite posets and wrapped
//! l-monoids, plus a name registry.

mod fraction;
mod lmonoid;
mod poset;
mod product;
mod registry;
mod zmod;

pub use fraction::{fraction_field, FractionField, IntegralDomain};
pub use lmonoid::{l_monoid_wrap, BinOp, LMonoidOps, WrappedLMonoid};
pub use poset::{lattice_from_poset, DownsetLattice, Poset, PosetDescription};
pub use product::{direct_product, DirectProduct};
pub use registry::{Named, Registry, BUILTIN_NAMES};
pub use zmod::{modulo_ring, ZMod, MAX_MODULUS};
