/*! Computing with finite categories and their C-sets.

`csetkit` represents finite categories by explicit composition tables and
C-sets (functors to finite sets) by carrier lists and action tables, all
validated exhaustively. On top of that it builds:

- decomposition of C-sets into indecomposable components and simplicity
  testing ([`cset`]);
- bisets and their class-valued composition over a middle category
  ([`biset`]);
- the restriction/induction adjunction along a subcategory inclusion,
  with its unit and explicit hom-set bijections ([`adjunction`]);
- Burnside rings: an isomorphism-class registry, ring arithmetic, and
  multiplication tables for groupoids, or an infinite-rank certificate
  otherwise ([`burnside`]);
- an audit that checks four equivalent characterizations of groupoids
  against each other and produces constructive witnesses when they fail
  ([`characterize`]).

Everything is immutable after validation and every operation is a pure
function, so values can be shared and evaluated concurrently. The
[`examples`] module has ready-made categories and C-sets; the `csetkit`
binary exposes the whole toolkit on the command line (see [`cli`]).
*/

pub mod adjunction;
pub mod biset;
pub mod burnside;
pub mod category;
pub mod characterize;
pub mod cli;
pub mod cset;
pub mod examples;
pub mod io;

pub use category::{Category, CategorySpec, Direction, Functor, MorId, ObjId, Subcategory, Walk};
pub use cset::{CSet, Elem, NatTrans, SubCSet};
