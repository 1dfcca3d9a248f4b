/*! JSON file formats.

Categories, C-sets, bisets, functors, group tables, and subcategory
selections all travel as JSON. A category reference inside another file
is either an inline category object, a path (resolved relative to the
referencing file), or `"example:NAME"` for a built-in.

Serialization is canonical: carriers are keyed in object order, actions
omit identity entries and empty functions, and composition entries omit
identity-implied pairs, so `serialize(parse(file))` is field-identical
for canonical files.
*/

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::Deserialize;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::biset::{Biset, BisetError};
use crate::category::{
    Category, CategoryError, CategorySpec, Functor, FunctorError, NotAGroup, Subcategory,
    SubcategoryError,
};
use crate::cset::{CSet, CSetError};
use crate::examples;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {message}")]
    Read { path: PathBuf, message: String },
    #[error("{path}: {message}")]
    Schema { path: PathBuf, message: String },
    #[error("unknown built-in example `{0}`")]
    UnknownExample(String),
    #[error("{0}")]
    Category(#[from] CategoryError),
    #[error("{0}")]
    CSet(#[from] CSetError),
    #[error("{0}")]
    Biset(#[from] BisetError),
    #[error("{0}")]
    Functor(#[from] FunctorError),
    #[error("{0}")]
    Subcategory(#[from] SubcategoryError),
    #[error("{0}")]
    Group(#[from] NotAGroup),
    #[error("functor file does not map {kind} `{name}`")]
    MissingMapping { kind: &'static str, name: String },
    #[error("unknown {kind} `{name}`")]
    UnknownToken { kind: &'static str, name: String },
}

/// A category referenced by path, by built-in name, or inline.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum CategoryRef {
    Name(String),
    Inline(CategorySpec),
}

fn read_to_string(path: &Path) -> Result<String, IoError> {
    std::fs::read_to_string(path).map_err(|e| IoError::Read {
        path: path.to_owned(),
        message: e.to_string(),
    })
}

fn parse_json<T: serde::de::DeserializeOwned>(path: &Path, text: &str) -> Result<T, IoError> {
    serde_json::from_str(text).map_err(|e| IoError::Schema {
        path: path.to_owned(),
        message: e.to_string(),
    })
}

/// Resolves a category reference; relative paths are taken against
/// `base_dir`.
pub fn resolve_category(r: &CategoryRef, base_dir: &Path) -> Result<Arc<Category>, IoError> {
    match r {
        CategoryRef::Inline(spec) => Ok(Arc::new(spec.validate()?)),
        CategoryRef::Name(name) => {
            if let Some(example) = name.strip_prefix("example:") {
                return builtin_category(example);
            }
            let path = base_dir.join(name);
            read_category(&path)
        }
    }
}

pub fn builtin_category(name: &str) -> Result<Arc<Category>, IoError> {
    examples::categories()
        .get(name)
        .cloned()
        .ok_or_else(|| IoError::UnknownExample(name.to_owned()))
}

pub fn builtin_cset(name: &str) -> Result<CSet, IoError> {
    examples::csets()
        .get(name)
        .cloned()
        .ok_or_else(|| IoError::UnknownExample(name.to_owned()))
}

pub fn read_category(path: &Path) -> Result<Arc<Category>, IoError> {
    let text = read_to_string(path)?;
    let spec: CategorySpec = parse_json(path, &text)?;
    Ok(Arc::new(spec.validate()?))
}

#[derive(Debug, Deserialize)]
struct CSetFile {
    category: CategoryRef,
    #[serde(default)]
    carrier: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    action: BTreeMap<String, BTreeMap<String, String>>,
}

pub fn read_cset(path: &Path) -> Result<CSet, IoError> {
    let text = read_to_string(path)?;
    let file: CSetFile = parse_json(path, &text)?;
    let base_dir = path.parent().unwrap_or_else(|| Path::new("."));
    let base = resolve_category(&file.category, base_dir)?;
    Ok(CSet::from_parts(base, &file.carrier, &file.action)?)
}

#[derive(Debug, Deserialize)]
struct BisetFile {
    left: CategoryRef,
    right: CategoryRef,
    #[serde(default)]
    carrier: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    action: BTreeMap<String, BTreeMap<String, String>>,
}

/// Reads a biset file: carriers and actions over the product category,
/// keyed by rendered pair tokens such as `"(x,y)"` and `"(f,g)"`.
pub fn read_biset(path: &Path) -> Result<Biset, IoError> {
    let text = read_to_string(path)?;
    let file: BisetFile = parse_json(path, &text)?;
    let base_dir = path.parent().unwrap_or_else(|| Path::new("."));
    let left = resolve_category(&file.left, base_dir)?;
    let right = resolve_category(&file.right, base_dir)?;
    let product = Arc::new(left.product(&right.opposite()));
    let cset = CSet::from_parts(product, &file.carrier, &file.action)?;
    Ok(Biset::new(left, right, cset)?)
}

#[derive(Debug, Deserialize)]
struct FunctorFile {
    dom: CategoryRef,
    cod: CategoryRef,
    objects: BTreeMap<String, String>,
    #[serde(default)]
    morphisms: BTreeMap<String, String>,
}

pub fn read_functor(path: &Path) -> Result<Functor, IoError> {
    let text = read_to_string(path)?;
    let file: FunctorFile = parse_json(path, &text)?;
    let base_dir = path.parent().unwrap_or_else(|| Path::new("."));
    let dom = resolve_category(&file.dom, base_dir)?;
    let cod = resolve_category(&file.cod, base_dir)?;
    let mut ob_map = Vec::with_capacity(dom.object_count());
    for x in dom.objects() {
        let name = dom.obj_name(x);
        let image = file.objects.get(name).ok_or(IoError::MissingMapping {
            kind: "object",
            name: name.to_owned(),
        })?;
        ob_map.push(cod.obj(image).ok_or(IoError::UnknownToken {
            kind: "object",
            name: image.clone(),
        })?);
    }
    let mut mor_map = Vec::with_capacity(dom.morphism_count());
    for m in dom.morphisms() {
        let name = dom.mor_name(m);
        // Identity images are implied by the object map.
        let image = match file.morphisms.get(name) {
            Some(image) => cod.mor(image).ok_or(IoError::UnknownToken {
                kind: "morphism",
                name: image.clone(),
            })?,
            None if dom.is_identity(m) => cod.identity(ob_map[dom.src(m).index()]),
            None => {
                return Err(IoError::MissingMapping {
                    kind: "morphism",
                    name: name.to_owned(),
                })
            }
        };
        mor_map.push(image);
    }
    Ok(Functor::new(dom, cod, ob_map, mor_map)?)
}

#[derive(Debug, Deserialize)]
struct GroupTableFile {
    elements: Vec<String>,
    identity: usize,
    table: Vec<Vec<usize>>,
}

/// Reads a group multiplication table (`table[i][j]` is "element i then
/// element j") and builds its delooping.
pub fn read_delooping(path: &Path) -> Result<Arc<Category>, IoError> {
    let text = read_to_string(path)?;
    let file: GroupTableFile = parse_json(path, &text)?;
    Ok(Arc::new(Category::delooping(
        &file.elements,
        file.identity,
        &file.table,
    )?))
}

#[derive(Debug, Deserialize)]
struct SubcategoryFile {
    objects: Vec<String>,
    morphisms: Vec<String>,
}

/// Reads a subcategory selection and applies it to `parent`.
pub fn read_subcategory(path: &Path, parent: Arc<Category>) -> Result<Subcategory, IoError> {
    let text = read_to_string(path)?;
    let file: SubcategoryFile = parse_json(path, &text)?;
    let mut objs = Vec::with_capacity(file.objects.len());
    for name in &file.objects {
        objs.push(parent.obj(name).ok_or(IoError::UnknownToken {
            kind: "object",
            name: name.clone(),
        })?);
    }
    let mut mors = Vec::with_capacity(file.morphisms.len());
    for name in &file.morphisms {
        mors.push(parent.mor(name).ok_or(IoError::UnknownToken {
            kind: "morphism",
            name: name.clone(),
        })?);
    }
    Ok(Subcategory::new(parent, &objs, &mors)?)
}

/// Canonical JSON for a category.
pub fn category_json(cat: &Category) -> Value {
    let spec = cat.to_spec();
    let mut morphisms = Vec::new();
    for m in &spec.morphisms {
        morphisms.push(json!({"id": m.id, "src": m.src, "tgt": m.tgt}));
    }
    let mut identity = Map::new();
    for obj in &spec.objects {
        identity.insert(obj.clone(), Value::String(spec.identity[obj].clone()));
    }
    json!({
        "objects": spec.objects,
        "morphisms": morphisms,
        "identity": identity,
        "compose": spec.compose,
    })
}

/// Canonical JSON for a C-set, with its base category inline. Identity
/// actions and empty functions are omitted.
pub fn cset_json(cset: &CSet) -> Value {
    let base = cset.base();
    let mut carrier = Map::new();
    for x in base.objects() {
        carrier.insert(
            base.obj_name(x).to_owned(),
            Value::Array(
                cset.carrier(x)
                    .iter()
                    .map(|t| Value::String(t.clone()))
                    .collect(),
            ),
        );
    }
    let mut action = Map::new();
    for m in base.morphisms() {
        if base.is_identity(m) || cset.carrier(base.src(m)).is_empty() {
            continue;
        }
        let mut map = Map::new();
        for (e, token) in cset.carrier(base.src(m)).iter().enumerate() {
            map.insert(
                token.clone(),
                Value::String(cset.carrier(base.tgt(m))[cset.action(m)[e]].clone()),
            );
        }
        action.insert(base.mor_name(m).to_owned(), Value::Object(map));
    }
    json!({
        "category": category_json(base),
        "carrier": carrier,
        "action": action,
    })
}

/// Canonical JSON for a biset: the underlying C-set keyed by pair tokens.
pub fn biset_json(biset: &Biset) -> Value {
    let inner = cset_json(biset.cset());
    json!({
        "left": category_json(biset.left()),
        "right": category_json(biset.right()),
        "carrier": inner["carrier"],
        "action": inner["action"],
    })
}
