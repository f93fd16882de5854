//! JSON instance files.
//!
//! Every file is one object tagged by `kind`: `trunc_sset`, `smap`, `fincat`,
//! `functor` or `presheaf`. Maps, functors and presheaves embed their source,
//! target or base in full. Decoding validates the payload.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cat::{FinCat, Functor, Morphism, Presheaf};
use crate::corpus::Item;
use crate::error::{Error, Result};
use crate::sset::{SMap, TruncSSet};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Instance {
    TruncSset(SSetJson),
    Smap(SMapJson),
    Fincat(CatJson),
    Functor(FunctorJson),
    Presheaf(PresheafJson),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SSetJson {
    pub dim: usize,
    /// Element ids, level by level.
    pub levels: Vec<Vec<String>>,
    /// `faces["n"][i][j]`: `d_i` of the `j`-th element of level `n`.
    pub faces: BTreeMap<String, Vec<Vec<usize>>>,
    pub degeneracies: BTreeMap<String, Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SMapJson {
    pub source: Box<Instance>,
    pub target: Box<Instance>,
    pub components: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MorphismJson {
    pub id: String,
    pub src: usize,
    pub tgt: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CatJson {
    pub objects: Vec<String>,
    pub morphisms: Vec<MorphismJson>,
    /// Object name to the index of its identity.
    pub identities: BTreeMap<String, usize>,
    /// `[g, f, g ∘ f]` for every composable pair, sorted.
    pub compose: Vec<[usize; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FunctorJson {
    pub source: Box<Instance>,
    pub target: Box<Instance>,
    pub objects: Vec<usize>,
    pub morphisms: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PresheafJson {
    pub base: Box<Instance>,
    pub sizes: Vec<usize>,
    /// `action[m][x]`: `P(m)` applied to `x ∈ P(tgt m)`.
    pub action: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

fn invalid(what: &str) -> Error {
    Error::InvalidInput(format!("expected a {what} instance"))
}

pub fn sset_to_json(x: &TruncSSet) -> Instance {
    let d = x.dim();
    Instance::TruncSset(SSetJson {
        dim: d,
        levels: (0..=d).map(|n| x.labels(n).to_vec()).collect(),
        faces: (1..=d).map(|n| (n.to_string(), (0..=n).map(|i| x.face_table(n, i).to_vec()).collect())).collect(),
        degeneracies: (0..d).map(|n| (n.to_string(), (0..=n).map(|i| x.degen_table(n, i).to_vec()).collect())).collect(),
        name: None,
        note: None,
    })
}

fn table(m: &BTreeMap<String, Vec<Vec<usize>>>, n: usize, what: &str) -> Result<Vec<Vec<usize>>> {
    m.get(&n.to_string()).cloned().ok_or_else(|| Error::InvalidSSet(vec![format!("missing {what} of level {n}")]))
}

pub fn sset_from_json(inst: &Instance) -> Result<TruncSSet> {
    let Instance::TruncSset(j) = inst else { return Err(invalid("trunc_sset")) };
    let d = j.dim;
    let faces = (1..=d).map(|n| table(&j.faces, n, "faces")).collect::<Result<Vec<_>>>()?;
    let degens = (0..d).map(|n| table(&j.degeneracies, n, "degeneracies")).collect::<Result<Vec<_>>>()?;
    TruncSSet::from_tables(d, j.levels.clone(), faces, degens)
}

pub fn smap_to_json(f: &SMap) -> Instance {
    Instance::Smap(SMapJson {
        source: Box::new(sset_to_json(f.source())),
        target: Box::new(sset_to_json(f.target())),
        components: f.components().to_vec(),
        name: None,
        note: None,
    })
}

pub fn smap_from_json(inst: &Instance) -> Result<SMap> {
    let Instance::Smap(j) = inst else { return Err(invalid("smap")) };
    let source = Arc::new(sset_from_json(&j.source)?);
    let target = Arc::new(sset_from_json(&j.target)?);
    SMap::new(source, target, j.components.clone())
}

pub fn cat_to_json(c: &FinCat) -> Instance {
    let mut compose: Vec<[usize; 3]> = c.composition_table().iter().map(|(&(g, f), &h)| [g, f, h]).collect();
    compose.sort_unstable();
    Instance::Fincat(CatJson {
        objects: c.objects().to_vec(),
        morphisms: c.morphisms().iter().map(|m| MorphismJson { id: m.name.clone(), src: m.src, tgt: m.tgt }).collect(),
        identities: (0..c.num_objects()).map(|o| (c.object_name(o).to_string(), c.identity(o))).collect(),
        compose,
        name: None,
        note: None,
    })
}

pub fn cat_from_json(inst: &Instance) -> Result<FinCat> {
    let Instance::Fincat(j) = inst else { return Err(invalid("fincat")) };
    let morphisms = j.morphisms.iter().map(|m| Morphism { name: m.id.clone(), src: m.src, tgt: m.tgt }).collect();
    let identities = j
        .objects
        .iter()
        .map(|o| j.identities.get(o).copied().ok_or_else(|| Error::InvalidCategory(format!("no identity for {o}"))))
        .collect::<Result<Vec<_>>>()?;
    let compose = j.compose.iter().map(|&[g, f, h]| ((g, f), h)).collect();
    FinCat::new(j.objects.clone(), morphisms, identities, compose)
}

pub fn functor_to_json(f: &Functor) -> Instance {
    Instance::Functor(FunctorJson {
        source: Box::new(cat_to_json(f.source())),
        target: Box::new(cat_to_json(f.target())),
        objects: f.on_objects().to_vec(),
        morphisms: f.on_morphisms().to_vec(),
        name: None,
        note: None,
    })
}

pub fn functor_from_json(inst: &Instance) -> Result<Functor> {
    let Instance::Functor(j) = inst else { return Err(invalid("functor")) };
    let source = Arc::new(cat_from_json(&j.source)?);
    let target = Arc::new(cat_from_json(&j.target)?);
    Functor::new(source, target, j.objects.clone(), j.morphisms.clone())
}

pub fn presheaf_to_json(p: &Presheaf) -> Instance {
    Instance::Presheaf(PresheafJson {
        base: Box::new(cat_to_json(p.base())),
        sizes: p.sizes().to_vec(),
        action: p.actions().to_vec(),
        name: None,
        note: None,
    })
}

pub fn presheaf_from_json(inst: &Instance) -> Result<Presheaf> {
    let Instance::Presheaf(j) = inst else { return Err(invalid("presheaf")) };
    Presheaf::new(Arc::new(cat_from_json(&j.base)?), j.sizes.clone(), j.action.clone())
}

pub fn item_to_json(item: &Item) -> Instance {
    match item {
        Item::Category(c) => cat_to_json(c),
        Item::Functor(f) => functor_to_json(f),
        Item::SSet(x) => sset_to_json(x),
        Item::Map(f) => smap_to_json(f),
        Item::Presheaf(p) => presheaf_to_json(p),
    }
}

/// Decodes and validates.
pub fn item_from_json(inst: &Instance) -> Result<Item> {
    Ok(match inst {
        Instance::TruncSset(_) => Item::SSet(Arc::new(sset_from_json(inst)?)),
        Instance::Smap(_) => Item::Map(smap_from_json(inst)?),
        Instance::Fincat(_) => Item::Category(Arc::new(cat_from_json(inst)?)),
        Instance::Functor(_) => Item::Functor(functor_from_json(inst)?),
        Instance::Presheaf(_) => Item::Presheaf(presheaf_from_json(inst)?),
    })
}

impl Instance {
    pub fn with_name(mut self, name: impl Into<String>, note: Option<String>) -> Self {
        let (n, t) = match &mut self {
            Instance::TruncSset(j) => (&mut j.name, &mut j.note),
            Instance::Smap(j) => (&mut j.name, &mut j.note),
            Instance::Fincat(j) => (&mut j.name, &mut j.note),
            Instance::Functor(j) => (&mut j.name, &mut j.note),
            Instance::Presheaf(j) => (&mut j.name, &mut j.note),
        };
        *n = Some(name.into());
        *t = note;
        self
    }
}

pub fn parse(text: &str) -> Result<Instance> {
    serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("malformed instance: {e}")))
}

pub fn to_string(inst: &Instance) -> String {
    serde_json::to_string_pretty(inst).expect("instances serialize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn corpus_roundtrips() {
        for (name, _) in corpus::list() {
            let item = corpus::lookup(&name, 5).unwrap();
            let j = item_to_json(&item);
            let back = item_from_json(&parse(&to_string(&j)).unwrap()).unwrap();
            assert_eq!(item_to_json(&back), j, "{name}");
        }
    }

    #[test]
    fn face_tables_are_keyed_by_level() {
        let x = crate::sset::representable(1, 2);
        let Instance::TruncSset(j) = sset_to_json(&x) else { unreachable!() };
        assert_eq!(j.levels[0], vec!["0", "1"]);
        assert_eq!(j.faces["1"].len(), 2);
        assert_eq!(j.degeneracies["0"][0].len(), 2);
        let text = to_string(&sset_to_json(&x));
        assert!(text.contains("\"kind\": \"trunc_sset\""));
    }

    #[test]
    fn bad_tables_are_rejected() {
        let x = crate::sset::representable(1, 1);
        let Instance::TruncSset(mut j) = sset_to_json(&x) else { unreachable!() };
        j.faces.get_mut("1").unwrap()[0][0] = 7;
        assert!(sset_from_json(&Instance::TruncSset(j)).is_err());
        assert!(parse("{\"kind\":\"cube\"}").is_err());
    }
}
