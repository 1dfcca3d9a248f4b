/*! Finite categories with explicit composition tables.

A [`Category`] stores a finite set of objects, a finite set of morphisms
with source and target, an identity morphism per object, and a composition
table that is total on composable pairs. Validation checks the category
axioms exhaustively: identity endpoints, identity laws, totality of the
table, endpoint compatibility of every composite, and associativity on all
composable triples.

Composition is written in diagrammatic order throughout: `compose(f, g)`
is "first `f`, then `g`". A file entry `[f, g, h]` likewise means that
following `f` and then `g` equals `h`.

Derived constructions ([`Category::opposite`], [`Category::product`],
[`Category::delooping`], [`Subcategory`]) all return validated categories.
*/

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Index of an object within its owning [`Category`].
///
/// Object order is the declaration (file) order and is used for
/// deterministic iteration everywhere.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ObjId(pub(crate) usize);

/// Index of a morphism within its owning [`Category`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MorId(pub(crate) usize);

impl ObjId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl MorId {
    pub fn index(self) -> usize {
        self.0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Morphism {
    name: String,
    src: ObjId,
    tgt: ObjId,
}

/// A validated finite category.
///
/// Immutable after construction; all accessors are pure, so values can be
/// shared freely (the rest of the crate passes them around as
/// `Arc<Category>`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Category {
    objects: Vec<String>,
    morphisms: Vec<Morphism>,
    identities: Vec<MorId>,
    /// `table[f][g] = Some(h)` exactly when `tgt(f) == src(g)`; `h` is
    /// "f then g".
    table: Vec<Vec<Option<MorId>>>,
}

/// Raw description of a category, as found in JSON files.
///
/// Composition entries `[f, g, h]` are read left-to-right along the walk
/// direction: traversing `f` and then `g` equals `h`. Entries for pairs
/// involving identities may be omitted; they are implied by the identity
/// laws.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CategorySpec {
    pub objects: Vec<String>,
    pub morphisms: Vec<MorSpec>,
    pub identity: BTreeMap<String, String>,
    #[serde(default)]
    pub compose: Vec<[String; 3]>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MorSpec {
    pub id: String,
    pub src: String,
    pub tgt: String,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum CategoryError {
    #[error("duplicate token `{0}`")]
    DuplicateToken(String),
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("unknown morphism `{0}`")]
    UnknownMorphism(String),
    #[error("object `{0}` has no identity morphism")]
    MissingIdentity(String),
    #[error("identity of `{obj}` is `{mor}`, whose endpoints are not both `{obj}`")]
    IdentityEndpoints { obj: String, mor: String },
    #[error("composite of `{f}` then `{g}` is declared for non-composable endpoints")]
    EndpointMismatch { f: String, g: String },
    #[error("composite `{h}` of `{f}` then `{g}` must go {src} -> {tgt}")]
    BadCompositeEndpoints {
        f: String,
        g: String,
        h: String,
        src: String,
        tgt: String,
    },
    #[error("conflicting composites for `{f}` then `{g}`: `{first}` vs `{second}`")]
    ConflictingComposite {
        f: String,
        g: String,
        first: String,
        second: String,
    },
    #[error("no composite declared for `{f}` then `{g}`")]
    CompositionGap { f: String, g: String },
    #[error("associativity fails on ({f}, {g}, {h})")]
    NonAssociative { f: String, g: String, h: String },
}

impl CategorySpec {
    /// Validates the description and returns an immutable [`Category`].
    ///
    /// Every axiom is checked exhaustively; the error pinpoints the first
    /// violation in declaration order.
    pub fn validate(&self) -> Result<Category, CategoryError> {
        let mut obj_index = BTreeMap::new();
        for (i, name) in self.objects.iter().enumerate() {
            if obj_index.insert(name.clone(), ObjId(i)).is_some() {
                return Err(CategoryError::DuplicateToken(name.clone()));
            }
        }
        let mut mor_index = BTreeMap::new();
        let mut morphisms = Vec::with_capacity(self.morphisms.len());
        for (i, m) in self.morphisms.iter().enumerate() {
            if mor_index.insert(m.id.clone(), MorId(i)).is_some() {
                return Err(CategoryError::DuplicateToken(m.id.clone()));
            }
            let src = *obj_index
                .get(&m.src)
                .ok_or_else(|| CategoryError::UnknownObject(m.src.clone()))?;
            let tgt = *obj_index
                .get(&m.tgt)
                .ok_or_else(|| CategoryError::UnknownObject(m.tgt.clone()))?;
            morphisms.push(Morphism {
                name: m.id.clone(),
                src,
                tgt,
            });
        }

        let mut identities = Vec::with_capacity(self.objects.len());
        for (i, name) in self.objects.iter().enumerate() {
            let id_name = self
                .identity
                .get(name)
                .ok_or_else(|| CategoryError::MissingIdentity(name.clone()))?;
            let id = *mor_index
                .get(id_name)
                .ok_or_else(|| CategoryError::UnknownMorphism(id_name.clone()))?;
            let m = &morphisms[id.0];
            if m.src != ObjId(i) || m.tgt != ObjId(i) {
                return Err(CategoryError::IdentityEndpoints {
                    obj: name.clone(),
                    mor: id_name.clone(),
                });
            }
            identities.push(id);
        }

        let n = morphisms.len();
        let mut table: Vec<Vec<Option<MorId>>> = vec![vec![None; n]; n];
        // Identity laws fill the implied entries.
        for (i, m) in morphisms.iter().enumerate() {
            table[identities[m.src.0].0][i] = Some(MorId(i));
            table[i][identities[m.tgt.0].0] = Some(MorId(i));
        }
        for [f, g, h] in &self.compose {
            let fi = *mor_index
                .get(f)
                .ok_or_else(|| CategoryError::UnknownMorphism(f.clone()))?;
            let gi = *mor_index
                .get(g)
                .ok_or_else(|| CategoryError::UnknownMorphism(g.clone()))?;
            let hi = *mor_index
                .get(h)
                .ok_or_else(|| CategoryError::UnknownMorphism(h.clone()))?;
            if morphisms[fi.0].tgt != morphisms[gi.0].src {
                return Err(CategoryError::EndpointMismatch {
                    f: f.clone(),
                    g: g.clone(),
                });
            }
            if morphisms[hi.0].src != morphisms[fi.0].src
                || morphisms[hi.0].tgt != morphisms[gi.0].tgt
            {
                return Err(CategoryError::BadCompositeEndpoints {
                    f: f.clone(),
                    g: g.clone(),
                    h: h.clone(),
                    src: self.objects[morphisms[fi.0].src.0].clone(),
                    tgt: self.objects[morphisms[gi.0].tgt.0].clone(),
                });
            }
            match table[fi.0][gi.0] {
                Some(prev) if prev != hi => {
                    return Err(CategoryError::ConflictingComposite {
                        f: f.clone(),
                        g: g.clone(),
                        first: morphisms[prev.0].name.clone(),
                        second: h.clone(),
                    })
                }
                _ => table[fi.0][gi.0] = Some(hi),
            }
        }

        // Totality on composable pairs.
        for (fi, f) in morphisms.iter().enumerate() {
            for (gi, g) in morphisms.iter().enumerate() {
                if f.tgt == g.src && table[fi][gi].is_none() {
                    return Err(CategoryError::CompositionGap {
                        f: f.name.clone(),
                        g: g.name.clone(),
                    });
                }
            }
        }

        let cat = Category {
            objects: self.objects.clone(),
            morphisms,
            identities,
            table,
        };

        // Associativity on all composable triples.
        for f in cat.morphisms() {
            for g in cat.morphisms() {
                if !cat.composable(f, g) {
                    continue;
                }
                let fg = cat.compose(f, g);
                for h in cat.morphisms() {
                    if !cat.composable(g, h) {
                        continue;
                    }
                    let gh = cat.compose(g, h);
                    if cat.compose(fg, h) != cat.compose(f, gh) {
                        return Err(CategoryError::NonAssociative {
                            f: cat.mor_name(f).to_owned(),
                            g: cat.mor_name(g).to_owned(),
                            h: cat.mor_name(h).to_owned(),
                        });
                    }
                }
            }
        }

        Ok(cat)
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("not a group: {0}")]
pub struct NotAGroup(pub String);

impl Category {
    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn morphism_count(&self) -> usize {
        self.morphisms.len()
    }

    pub fn objects(&self) -> impl Iterator<Item = ObjId> {
        (0..self.objects.len()).map(ObjId)
    }

    pub fn morphisms(&self) -> impl Iterator<Item = MorId> {
        (0..self.morphisms.len()).map(MorId)
    }

    pub fn obj_name(&self, x: ObjId) -> &str {
        &self.objects[x.0]
    }

    pub fn mor_name(&self, f: MorId) -> &str {
        &self.morphisms[f.0].name
    }

    pub fn obj(&self, name: &str) -> Option<ObjId> {
        self.objects.iter().position(|o| o == name).map(ObjId)
    }

    pub fn mor(&self, name: &str) -> Option<MorId> {
        self.morphisms.iter().position(|m| m.name == name).map(MorId)
    }

    pub fn src(&self, f: MorId) -> ObjId {
        self.morphisms[f.0].src
    }

    pub fn tgt(&self, f: MorId) -> ObjId {
        self.morphisms[f.0].tgt
    }

    pub fn identity(&self, x: ObjId) -> MorId {
        self.identities[x.0]
    }

    pub fn is_identity(&self, f: MorId) -> bool {
        self.identities[self.src(f).0] == f
    }

    pub fn composable(&self, f: MorId, g: MorId) -> bool {
        self.tgt(f) == self.src(g)
    }

    /// The composite "first `f`, then `g`".
    ///
    /// Panics if `tgt(f) != src(g)`; guard with [`Category::composable`].
    pub fn compose(&self, f: MorId, g: MorId) -> MorId {
        self.table[f.0][g.0].expect("morphisms are not composable")
    }

    /// Morphisms from `x` to `y`, in declaration order.
    pub fn hom(&self, x: ObjId, y: ObjId) -> Vec<MorId> {
        self.morphisms()
            .filter(|&f| self.src(f) == x && self.tgt(f) == y)
            .collect()
    }

    /// A two-sided inverse of `f`, if one exists.
    pub fn inverse(&self, f: MorId) -> Option<MorId> {
        let (x, y) = (self.src(f), self.tgt(f));
        self.hom(y, x).into_iter().find(|&g| {
            self.compose(f, g) == self.identity(x) && self.compose(g, f) == self.identity(y)
        })
    }

    /// Does `f: x -> y` have a left inverse `g` with "f then g" = `1_x`?
    pub fn has_left_inverse(&self, f: MorId) -> bool {
        let (x, y) = (self.src(f), self.tgt(f));
        self.hom(y, x)
            .into_iter()
            .any(|g| self.compose(f, g) == self.identity(x))
    }

    /// Does `f: x -> y` have a right inverse `g` with "g then f" = `1_y`?
    pub fn has_right_inverse(&self, f: MorId) -> bool {
        let (x, y) = (self.src(f), self.tgt(f));
        self.hom(y, x)
            .into_iter()
            .any(|g| self.compose(g, f) == self.identity(y))
    }

    /// True iff every morphism has a two-sided inverse.
    pub fn is_groupoid(&self) -> bool {
        self.morphisms().all(|f| self.inverse(f).is_some())
    }

    /// True iff the undirected graph with an edge per morphism has at most
    /// one component. The empty category counts as connected.
    pub fn is_connected(&self) -> bool {
        if self.objects.is_empty() {
            return true;
        }
        let mut uf = UnionFind::new(self.objects.len());
        for m in &self.morphisms {
            uf.union(m.src.0, m.tgt.0);
        }
        let root = uf.find(0);
        (1..self.objects.len()).all(|i| uf.find(i) == root)
    }

    /// The opposite category: same tokens, endpoints swapped, composition
    /// reversed. Applying it twice gives back an equal category.
    pub fn opposite(&self) -> Category {
        let morphisms = self
            .morphisms
            .iter()
            .map(|m| Morphism {
                name: m.name.clone(),
                src: m.tgt,
                tgt: m.src,
            })
            .collect();
        let n = self.morphisms.len();
        let mut table = vec![vec![None; n]; n];
        for (f, row) in table.iter_mut().enumerate() {
            for (g, cell) in row.iter_mut().enumerate() {
                *cell = self.table[g][f];
            }
        }
        Category {
            objects: self.objects.clone(),
            morphisms,
            identities: self.identities.clone(),
            table,
        }
    }

    /// The product category: objects and morphisms are pairs (tokens
    /// rendered `"(a,b)"`), composition componentwise.
    pub fn product(&self, other: &Category) -> Category {
        let objects: Vec<String> = self
            .objects
            .iter()
            .flat_map(|a| other.objects.iter().map(move |b| format!("({a},{b})")))
            .collect();
        let on = other.objects.len();
        let pair_obj = |a: ObjId, b: ObjId| ObjId(a.0 * on + b.0);
        let mn = other.morphisms.len();
        let pair_mor = |f: usize, g: usize| MorId(f * mn + g);
        let mut morphisms = Vec::with_capacity(self.morphisms.len() * mn);
        for f in &self.morphisms {
            for g in &other.morphisms {
                morphisms.push(Morphism {
                    name: format!("({},{})", f.name, g.name),
                    src: pair_obj(f.src, g.src),
                    tgt: pair_obj(f.tgt, g.tgt),
                });
            }
        }
        let identities = self
            .identities
            .iter()
            .flat_map(|&i| other.identities.iter().map(move |&j| pair_mor(i.0, j.0)))
            .collect();
        let total = morphisms.len();
        let mut table = vec![vec![None; total]; total];
        for f1 in 0..self.morphisms.len() {
            for g1 in 0..mn {
                for f2 in 0..self.morphisms.len() {
                    for g2 in 0..mn {
                        if let (Some(h1), Some(h2)) =
                            (self.table[f1][f2], other.table[g1][g2])
                        {
                            table[pair_mor(f1, g1).0][pair_mor(f2, g2).0] =
                                Some(pair_mor(h1.0, h2.0));
                        }
                    }
                }
            }
        }
        Category {
            objects,
            morphisms,
            identities,
            table,
        }
    }

    /// Builds the one-object category whose morphisms are the elements of
    /// a finite group, given by its multiplication table.
    ///
    /// `table[i][j]` is the index of "element i, then element j"; group
    /// axioms (associativity, identity, inverses) are checked first.
    pub fn delooping(
        elements: &[String],
        identity: usize,
        table: &[Vec<usize>],
    ) -> Result<Category, NotAGroup> {
        let n = elements.len();
        if n == 0 {
            return Err(NotAGroup("empty element list".into()));
        }
        if identity >= n {
            return Err(NotAGroup(format!("identity index {identity} out of range")));
        }
        if table.len() != n || table.iter().any(|row| row.len() != n) {
            return Err(NotAGroup(format!("table is not {n}x{n}")));
        }
        for row in table {
            for &v in row {
                if v >= n {
                    return Err(NotAGroup(format!("table entry {v} out of range")));
                }
            }
        }
        for (i, e) in elements.iter().enumerate() {
            if table[identity][i] != i || table[i][identity] != i {
                return Err(NotAGroup(format!("`{e}` violates the identity law")));
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if table[table[i][j]][k] != table[i][table[j][k]] {
                        return Err(NotAGroup(format!(
                            "associativity fails on ({}, {}, {})",
                            elements[i], elements[j], elements[k]
                        )));
                    }
                }
            }
        }
        for (i, e) in elements.iter().enumerate() {
            if !(0..n).any(|j| table[i][j] == identity && table[j][i] == identity) {
                return Err(NotAGroup(format!("`{e}` has no inverse")));
            }
        }
        let spec = CategorySpec {
            objects: vec!["*".into()],
            morphisms: elements
                .iter()
                .map(|e| MorSpec {
                    id: e.clone(),
                    src: "*".into(),
                    tgt: "*".into(),
                })
                .collect(),
            identity: BTreeMap::from([("*".into(), elements[identity].clone())]),
            compose: (0..n)
                .flat_map(|i| {
                    let elements = &elements;
                    let table = &table;
                    (0..n).map(move |j| {
                        [
                            elements[i].clone(),
                            elements[j].clone(),
                            elements[table[i][j]].clone(),
                        ]
                    })
                })
                .collect(),
        };
        Ok(spec.validate().expect("group table yields a category"))
    }

    /// The category with a single object `*` and a single morphism `id`.
    pub fn terminal() -> Category {
        Category::delooping(&["id".into()], 0, &[vec![0]]).expect("trivial group")
    }

    /// Canonical description of this category, with identity-implied
    /// composition entries omitted.
    pub fn to_spec(&self) -> CategorySpec {
        let mut compose = Vec::new();
        for f in self.morphisms() {
            for g in self.morphisms() {
                if self.composable(f, g) && !self.is_identity(f) && !self.is_identity(g) {
                    compose.push([
                        self.mor_name(f).to_owned(),
                        self.mor_name(g).to_owned(),
                        self.mor_name(self.compose(f, g)).to_owned(),
                    ]);
                }
            }
        }
        CategorySpec {
            objects: self.objects.clone(),
            morphisms: self
                .morphisms
                .iter()
                .map(|m| MorSpec {
                    id: m.name.clone(),
                    src: self.objects[m.src.0].clone(),
                    tgt: self.objects[m.tgt.0].clone(),
                })
                .collect(),
            identity: self
                .objects
                .iter()
                .enumerate()
                .map(|(i, o)| (o.clone(), self.morphisms[self.identities[i].0].name.clone()))
                .collect(),
            compose,
        }
    }
}

/// Minimal union-find used for connectivity.
struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let root = self.find(self.parent[x]);
            self.parent[x] = root;
        }
        self.parent[x]
    }

    fn union(&mut self, x: usize, y: usize) {
        let (rx, ry) = (self.find(x), self.find(y));
        if rx != ry {
            self.parent[rx] = ry;
        }
    }
}

/// Direction of a single walk step.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

/// A walk: a zig-zag of morphisms, each traversed forward (src to tgt)
/// or backward (tgt to src).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Walk {
    start: ObjId,
    steps: Vec<(MorId, Direction)>,
    end: ObjId,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum WalkError {
    #[error("step {index} (`{mor}`) does not start at the current object `{at}`")]
    BrokenChain {
        index: usize,
        mor: String,
        at: String,
    },
}

impl Walk {
    /// Validates the endpoint chain of the steps against the category.
    pub fn new(
        cat: &Category,
        start: ObjId,
        steps: Vec<(MorId, Direction)>,
    ) -> Result<Walk, WalkError> {
        let mut at = start;
        for (i, &(m, dir)) in steps.iter().enumerate() {
            let (from, to) = match dir {
                Direction::Forward => (cat.src(m), cat.tgt(m)),
                Direction::Backward => (cat.tgt(m), cat.src(m)),
            };
            if from != at {
                return Err(WalkError::BrokenChain {
                    index: i,
                    mor: cat.mor_name(m).to_owned(),
                    at: cat.obj_name(at).to_owned(),
                });
            }
            at = to;
        }
        Ok(Walk {
            start,
            steps,
            end: at,
        })
    }

    /// The trivial walk at `x`.
    pub fn trivial(x: ObjId) -> Walk {
        Walk {
            start: x,
            steps: Vec::new(),
            end: x,
        }
    }

    /// The same steps traversed in the opposite direction and order.
    pub fn opposite(&self) -> Walk {
        Walk {
            start: self.end,
            steps: self
                .steps
                .iter()
                .rev()
                .map(|&(m, d)| {
                    (
                        m,
                        match d {
                            Direction::Forward => Direction::Backward,
                            Direction::Backward => Direction::Forward,
                        },
                    )
                })
                .collect(),
            end: self.start,
        }
    }

    pub fn start(&self) -> ObjId {
        self.start
    }

    pub fn end(&self) -> ObjId {
        self.end
    }

    pub fn steps(&self) -> &[(MorId, Direction)] {
        &self.steps
    }

    /// The walk "forward along `f`, then backward along `f`", repeated
    /// `t` times; starts and ends at `src(f)`.
    pub fn there_and_back(cat: &Category, f: MorId, t: usize) -> Walk {
        let steps = (0..t)
            .flat_map(|_| [(f, Direction::Forward), (f, Direction::Backward)])
            .collect();
        Walk::new(cat, cat.src(f), steps).expect("zig-zag chains by construction")
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum FunctorError {
    #[error("object map has {got} entries, expected {expected}")]
    ObjectMapLength { got: usize, expected: usize },
    #[error("morphism map has {got} entries, expected {expected}")]
    MorphismMapLength { got: usize, expected: usize },
    #[error("image of `{mor}` has wrong endpoints")]
    EndpointMismatch { mor: String },
    #[error("identity of `{obj}` is not sent to an identity")]
    IdentityNotPreserved { obj: String },
    #[error("composition not preserved on (`{f}`, `{g}`)")]
    CompositionNotPreserved { f: String, g: String },
}

/// A validated functor between two finite categories.
#[derive(Clone, Debug)]
pub struct Functor {
    dom: Arc<Category>,
    cod: Arc<Category>,
    ob_map: Vec<ObjId>,
    mor_map: Vec<MorId>,
}

impl Functor {
    /// Checks endpoint compatibility, identity preservation, and
    /// composition preservation (exhaustively) before returning.
    pub fn new(
        dom: Arc<Category>,
        cod: Arc<Category>,
        ob_map: Vec<ObjId>,
        mor_map: Vec<MorId>,
    ) -> Result<Functor, FunctorError> {
        if ob_map.len() != dom.object_count() {
            return Err(FunctorError::ObjectMapLength {
                got: ob_map.len(),
                expected: dom.object_count(),
            });
        }
        if mor_map.len() != dom.morphism_count() {
            return Err(FunctorError::MorphismMapLength {
                got: mor_map.len(),
                expected: dom.morphism_count(),
            });
        }
        for f in dom.morphisms() {
            let img = mor_map[f.0];
            if cod.src(img) != ob_map[dom.src(f).0] || cod.tgt(img) != ob_map[dom.tgt(f).0] {
                return Err(FunctorError::EndpointMismatch {
                    mor: dom.mor_name(f).to_owned(),
                });
            }
        }
        for x in dom.objects() {
            if mor_map[dom.identity(x).0] != cod.identity(ob_map[x.0]) {
                return Err(FunctorError::IdentityNotPreserved {
                    obj: dom.obj_name(x).to_owned(),
                });
            }
        }
        for f in dom.morphisms() {
            for g in dom.morphisms() {
                if dom.composable(f, g)
                    && mor_map[dom.compose(f, g).0]
                        != cod.compose(mor_map[f.0], mor_map[g.0])
                {
                    return Err(FunctorError::CompositionNotPreserved {
                        f: dom.mor_name(f).to_owned(),
                        g: dom.mor_name(g).to_owned(),
                    });
                }
            }
        }
        Ok(Functor {
            dom,
            cod,
            ob_map,
            mor_map,
        })
    }

    pub fn identity(cat: Arc<Category>) -> Functor {
        let ob_map = cat.objects().collect();
        let mor_map = cat.morphisms().collect();
        Functor {
            dom: cat.clone(),
            cod: cat,
            ob_map,
            mor_map,
        }
    }

    pub fn dom(&self) -> &Arc<Category> {
        &self.dom
    }

    pub fn cod(&self) -> &Arc<Category> {
        &self.cod
    }

    pub fn on_obj(&self, x: ObjId) -> ObjId {
        self.ob_map[x.0]
    }

    pub fn on_mor(&self, f: MorId) -> MorId {
        self.mor_map[f.0]
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum SubcategoryError {
    #[error("selection does not include the identity of `{0}`")]
    MissingIdentity(String),
    #[error("selected morphism `{0}` has an endpoint outside the selected objects")]
    EndpointOutside(String),
    #[error("selection is not closed under composition: `{f}` then `{g}`")]
    NotClosed { f: String, g: String },
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("unknown morphism `{0}`")]
    UnknownMorphism(String),
}

/// A validated subcategory together with its inclusion functor.
#[derive(Clone, Debug)]
pub struct Subcategory {
    cat: Arc<Category>,
    inclusion: Functor,
}

impl Subcategory {
    /// Selects the given objects and morphisms of `parent`.
    ///
    /// The selection must contain the identities of all selected objects,
    /// keep morphism endpoints inside the selected objects, and be closed
    /// under composition.
    pub fn new(
        parent: Arc<Category>,
        objs: &[ObjId],
        mors: &[MorId],
    ) -> Result<Subcategory, SubcategoryError> {
        let obj_set: BTreeSet<ObjId> = objs.iter().copied().collect();
        let mor_set: BTreeSet<MorId> = mors.iter().copied().collect();
        for &x in &obj_set {
            if !mor_set.contains(&parent.identity(x)) {
                return Err(SubcategoryError::MissingIdentity(
                    parent.obj_name(x).to_owned(),
                ));
            }
        }
        for &f in &mor_set {
            if !obj_set.contains(&parent.src(f)) || !obj_set.contains(&parent.tgt(f)) {
                return Err(SubcategoryError::EndpointOutside(
                    parent.mor_name(f).to_owned(),
                ));
            }
        }
        for &f in &mor_set {
            for &g in &mor_set {
                if parent.composable(f, g) && !mor_set.contains(&parent.compose(f, g)) {
                    return Err(SubcategoryError::NotClosed {
                        f: parent.mor_name(f).to_owned(),
                        g: parent.mor_name(g).to_owned(),
                    });
                }
            }
        }

        // Keep the parent's declaration order.
        let kept_objs: Vec<ObjId> = parent.objects().filter(|o| obj_set.contains(o)).collect();
        let kept_mors: Vec<MorId> = parent.morphisms().filter(|m| mor_set.contains(m)).collect();
        let obj_pos: BTreeMap<ObjId, usize> =
            kept_objs.iter().enumerate().map(|(i, &o)| (o, i)).collect();
        let mor_pos: BTreeMap<MorId, usize> =
            kept_mors.iter().enumerate().map(|(i, &m)| (m, i)).collect();

        let morphisms = kept_mors
            .iter()
            .map(|&m| Morphism {
                name: parent.mor_name(m).to_owned(),
                src: ObjId(obj_pos[&parent.src(m)]),
                tgt: ObjId(obj_pos[&parent.tgt(m)]),
            })
            .collect();
        let identities = kept_objs
            .iter()
            .map(|&o| MorId(mor_pos[&parent.identity(o)]))
            .collect();
        let mut table = vec![vec![None; kept_mors.len()]; kept_mors.len()];
        for (fi, &f) in kept_mors.iter().enumerate() {
            for (gi, &g) in kept_mors.iter().enumerate() {
                if parent.composable(f, g) {
                    table[fi][gi] = Some(MorId(mor_pos[&parent.compose(f, g)]));
                }
            }
        }
        let cat = Arc::new(Category {
            objects: kept_objs
                .iter()
                .map(|&o| parent.obj_name(o).to_owned())
                .collect(),
            morphisms,
            identities,
            table,
        });
        let inclusion = Functor::new(cat.clone(), parent, kept_objs, kept_mors)
            .expect("inclusion of a closed selection is a functor");
        Ok(Subcategory { cat, inclusion })
    }

    /// The smallest subcategory containing the given morphisms: endpoints,
    /// their identities, and all composites.
    pub fn generated(parent: Arc<Category>, mors: &[MorId]) -> Subcategory {
        let mut objs: BTreeSet<ObjId> = BTreeSet::new();
        let mut set: BTreeSet<MorId> = mors.iter().copied().collect();
        for &f in mors {
            objs.insert(parent.src(f));
            objs.insert(parent.tgt(f));
        }
        for &x in &objs {
            set.insert(parent.identity(x));
        }
        loop {
            let mut grew = false;
            let current: Vec<MorId> = set.iter().copied().collect();
            for &f in &current {
                for &g in &current {
                    if parent.composable(f, g) && set.insert(parent.compose(f, g)) {
                        grew = true;
                    }
                }
            }
            if !grew {
                break;
            }
        }
        let objs: Vec<ObjId> = objs.into_iter().collect();
        let mors: Vec<MorId> = set.into_iter().collect();
        Subcategory::new(parent, &objs, &mors).expect("generated selection is closed")
    }

    /// The whole parent as a subcategory of itself.
    pub fn full(parent: Arc<Category>) -> Subcategory {
        let objs: Vec<ObjId> = parent.objects().collect();
        let mors: Vec<MorId> = parent.morphisms().collect();
        Subcategory::new(parent, &objs, &mors).expect("full selection is closed")
    }

    pub fn cat(&self) -> &Arc<Category> {
        &self.cat
    }

    pub fn inclusion(&self) -> &Functor {
        &self.inclusion
    }

    pub fn parent(&self) -> &Arc<Category> {
        self.inclusion.cod()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arrow_spec() -> CategorySpec {
        CategorySpec {
            objects: vec!["x".into(), "y".into()],
            morphisms: vec![
                MorSpec {
                    id: "1x".into(),
                    src: "x".into(),
                    tgt: "x".into(),
                },
                MorSpec {
                    id: "1y".into(),
                    src: "y".into(),
                    tgt: "y".into(),
                },
                MorSpec {
                    id: "a".into(),
                    src: "x".into(),
                    tgt: "y".into(),
                },
            ],
            identity: BTreeMap::from([("x".into(), "1x".into()), ("y".into(), "1y".into())]),
            compose: vec![],
        }
    }

    fn c2() -> Category {
        Category::delooping(&["e".into(), "g".into()], 0, &[vec![0, 1], vec![1, 0]]).unwrap()
    }

    #[test]
    fn arrow_category_validates() {
        let cat = arrow_spec().validate().unwrap();
        assert_eq!(cat.object_count(), 2);
        assert_eq!(cat.morphism_count(), 3);
        let a = cat.mor("a").unwrap();
        let x = cat.obj("x").unwrap();
        assert_eq!(cat.compose(cat.identity(x), a), a);
        assert!(!cat.is_groupoid());
        assert!(cat.is_connected());
    }

    #[test]
    fn delooping_c2_is_groupoid() {
        let cat = c2();
        assert_eq!(cat.morphism_count(), 2);
        assert!(cat.is_groupoid());
        assert!(cat.is_connected());
    }

    #[test]
    fn bad_composite_endpoints_rejected() {
        let mut spec = arrow_spec();
        // "a then 1y" must be a, not 1y: declaring 1y conflicts.
        spec.compose.push(["a".into(), "1y".into(), "1y".into()]);
        match spec.validate() {
            Err(CategoryError::BadCompositeEndpoints { .. })
            | Err(CategoryError::ConflictingComposite { .. }) => {}
            other => panic!("expected endpoint/conflict error, got {other:?}"),
        }
    }

    #[test]
    fn composition_gap_detected() {
        // Two composable non-identity morphisms with no declared composite.
        let spec = CategorySpec {
            objects: vec!["x".into(), "y".into(), "z".into()],
            morphisms: vec![
                MorSpec {
                    id: "1x".into(),
                    src: "x".into(),
                    tgt: "x".into(),
                },
                MorSpec {
                    id: "1y".into(),
                    src: "y".into(),
                    tgt: "y".into(),
                },
                MorSpec {
                    id: "1z".into(),
                    src: "z".into(),
                    tgt: "z".into(),
                },
                MorSpec {
                    id: "a".into(),
                    src: "x".into(),
                    tgt: "y".into(),
                },
                MorSpec {
                    id: "b".into(),
                    src: "y".into(),
                    tgt: "z".into(),
                },
            ],
            identity: BTreeMap::from([
                ("x".into(), "1x".into()),
                ("y".into(), "1y".into()),
                ("z".into(), "1z".into()),
            ]),
            compose: vec![],
        };
        assert!(matches!(
            spec.validate(),
            Err(CategoryError::CompositionGap { .. })
        ));
    }

    #[test]
    fn idempotent_monoid_is_not_a_group() {
        let err = Category::delooping(
            &["e".into(), "f".into()],
            0,
            &[vec![0, 1], vec![1, 1]],
        )
        .unwrap_err();
        assert!(err.0.contains("no inverse"));
    }

    #[test]
    fn groupoid_check_rejects_idempotent_loop() {
        // One object, one non-identity idempotent: no inverse exists.
        let spec = CategorySpec {
            objects: vec!["x".into()],
            morphisms: vec![
                MorSpec {
                    id: "1".into(),
                    src: "x".into(),
                    tgt: "x".into(),
                },
                MorSpec {
                    id: "f".into(),
                    src: "x".into(),
                    tgt: "x".into(),
                },
            ],
            identity: BTreeMap::from([("x".into(), "1".into())]),
            compose: vec![["f".into(), "f".into(), "f".into()]],
        };
        let cat = spec.validate().unwrap();
        assert!(!cat.is_groupoid());
    }

    #[test]
    fn opposite_is_involutive() {
        let cat = arrow_spec().validate().unwrap();
        let a = cat.mor("a").unwrap();
        let op = cat.opposite();
        assert_eq!(op.src(a), cat.tgt(a));
        assert_eq!(op.opposite(), cat);
        assert_eq!(c2().opposite().morphism_count(), 2);
    }

    #[test]
    fn product_counts_and_identities() {
        let arrow = arrow_spec().validate().unwrap();
        assert_eq!(arrow.product(&arrow).morphism_count(), 9);
        let prod = arrow.product(&Category::terminal());
        let xstar = prod.obj("(x,*)").unwrap();
        assert_eq!(prod.mor_name(prod.identity(xstar)), "(1x,id)");
        assert!(prod.is_connected());
    }

    #[test]
    fn product_preserves_validity() {
        let arrow = arrow_spec().validate().unwrap();
        let prod = arrow.product(&c2());
        // Revalidating through the spec round-trip confirms the axioms.
        assert_eq!(prod.to_spec().validate().unwrap(), prod);
        assert_eq!(arrow.opposite().to_spec().validate().unwrap(), arrow.opposite());
    }

    #[test]
    fn subcategory_requires_identities() {
        let cat = Arc::new(arrow_spec().validate().unwrap());
        let a = cat.mor("a").unwrap();
        let objs: Vec<ObjId> = cat.objects().collect();
        let err = Subcategory::new(cat.clone(), &objs, &[a]).unwrap_err();
        assert!(matches!(err, SubcategoryError::MissingIdentity(_)));
        let all: Vec<MorId> = cat.morphisms().collect();
        let sub = Subcategory::new(cat.clone(), &objs, &all).unwrap();
        assert_eq!(sub.cat().as_ref(), cat.as_ref());
    }

    #[test]
    fn generated_subcategory_closes_composites() {
        let path = CategorySpec {
            objects: vec!["x".into(), "y".into(), "z".into()],
            morphisms: vec![
                MorSpec {
                    id: "1x".into(),
                    src: "x".into(),
                    tgt: "x".into(),
                },
                MorSpec {
                    id: "1y".into(),
                    src: "y".into(),
                    tgt: "y".into(),
                },
                MorSpec {
                    id: "1z".into(),
                    src: "z".into(),
                    tgt: "z".into(),
                },
                MorSpec {
                    id: "a".into(),
                    src: "x".into(),
                    tgt: "y".into(),
                },
                MorSpec {
                    id: "b".into(),
                    src: "y".into(),
                    tgt: "z".into(),
                },
                MorSpec {
                    id: "ab".into(),
                    src: "x".into(),
                    tgt: "z".into(),
                },
            ],
            identity: BTreeMap::from([
                ("x".into(), "1x".into()),
                ("y".into(), "1y".into()),
                ("z".into(), "1z".into()),
            ]),
            compose: vec![["a".into(), "b".into(), "ab".into()]],
        };
        let cat = Arc::new(path.validate().unwrap());
        let a = cat.mor("a").unwrap();
        let b = cat.mor("b").unwrap();
        let sub = Subcategory::generated(cat, &[a, b]);
        assert_eq!(sub.cat().morphism_count(), 6);
    }

    #[test]
    fn walk_chains_endpoints() {
        let cat = arrow_spec().validate().unwrap();
        let a = cat.mor("a").unwrap();
        let x = cat.obj("x").unwrap();
        let w = Walk::there_and_back(&cat, a, 2);
        assert_eq!(w.start(), x);
        assert_eq!(w.end(), x);
        assert_eq!(w.steps().len(), 4);
        assert_eq!(w.opposite().opposite(), w);
        let broken = Walk::new(&cat, cat.obj("y").unwrap(), vec![(a, Direction::Forward)]);
        assert!(broken.is_err());
    }

    #[test]
    fn functor_validation_catches_non_functors() {
        let cat = Arc::new(c2());
        let id = Functor::identity(cat.clone());
        assert_eq!(id.on_obj(ObjId(0)), ObjId(0));
        // Swapping e and g breaks identity preservation.
        let bad = Functor::new(
            cat.clone(),
            cat.clone(),
            vec![ObjId(0)],
            vec![MorId(1), MorId(0)],
        );
        assert!(matches!(
            bad,
            Err(FunctorError::IdentityNotPreserved { .. })
        ));
    }
}
