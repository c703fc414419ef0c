//! JSON documents for words, forms and structure-constant tables.
//!
//! Roots are coefficient vectors over the simple roots and ring elements use
//! [`Ring::encode`]: decimal strings, nested arrays for products.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::gauss::{GaussForm, UhvForm, Unitri5Form};
use crate::group::Group;
use crate::ring::Ring;
use crate::roots::{CartanType, Family, RootId};
use crate::words::{GenKind, Generator, TorusParams, UnipotentParams, Word};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemDesc {
    #[serde(rename = "type")]
    pub family: String,
    pub rank: usize,
}

impl SystemDesc {
    pub fn of(ty: CartanType) -> SystemDesc {
        let s = ty.to_string();
        SystemDesc { family: s[..1].to_string(), rank: ty.rank }
    }

    pub fn cartan_type(&self) -> Result<CartanType> {
        let mut chars = self.family.chars();
        let family = match (chars.next(), chars.next()) {
            (Some(c), None) => Family::from_letter(c),
            _ => None,
        }
        .ok_or_else(|| Error::InvalidType(self.family.clone()))?;
        CartanType::new(family, self.rank)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct GenDoc {
    gen: GenKind,
    root: Vec<i32>,
    param: Value,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct WordDoc {
    system: SystemDesc,
    ring: String,
    word: Vec<GenDoc>,
}

fn root_json(group: &Group, a: RootId) -> Value {
    json!(group.system().vector(a))
}

fn parse_root(group: &Group, v: &Value) -> Result<RootId> {
    let coeffs: Vec<i32> =
        serde_json::from_value(v.clone()).map_err(|e| Error::Parse(format!("root must be an integer array: {e}")))?;
    if coeffs.len() != group.rank() {
        return Err(Error::Parse(format!("root {coeffs:?} has the wrong length for rank {}", group.rank())));
    }
    group.system().root(&coeffs)
}

pub fn word_to_json(group: &Group, word: &Word) -> Value {
    let doc = WordDoc {
        system: SystemDesc::of(group.system().cartan_type()),
        ring: group.ring.to_string(),
        word: word
            .gens
            .iter()
            .map(|g| GenDoc {
                gen: g.kind,
                root: group.system().vector(g.root).to_vec(),
                param: group.ring.encode(g.param),
            })
            .collect(),
    };
    serde_json::to_value(doc).expect("word documents serialise")
}

/// Parses a word document into its group and word.
pub fn word_from_json(v: &Value) -> Result<(Group, Word)> {
    let doc: WordDoc = serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
    let ring: Ring = doc.ring.parse()?;
    let group = Group::new(doc.system.cartan_type()?, ring);
    let gens = doc
        .word
        .iter()
        .map(|g| {
            let root = parse_root(&group, &json!(g.root))?;
            Ok(Generator { kind: g.gen, root, param: group.ring.decode(&g.param)? })
        })
        .collect::<Result<Vec<_>>>()?;
    let word = Word::new(gens);
    word.validate(&group.ring)?;
    Ok((group, word))
}

pub fn unipotent_to_json(group: &Group, u: &UnipotentParams) -> Value {
    Value::Array(u.terms.iter().map(|&(a, v)| json!([root_json(group, a), group.ring.encode(v)])).collect())
}

pub fn unipotent_from_json(group: &Group, v: &Value) -> Result<UnipotentParams> {
    let items = v.as_array().ok_or_else(|| Error::Parse("unipotent block must be an array".into()))?;
    let mut terms = items
        .iter()
        .map(|item| match item.as_array().map(Vec::as_slice) {
            Some([root, param]) => Ok((parse_root(group, root)?, group.ring.decode(param)?)),
            _ => Err(Error::Parse("block entries are [root, param] pairs".into())),
        })
        .collect::<Result<Vec<_>>>()?;
    terms.retain(|t| !group.ring.is_zero(t.1));
    terms.sort_by_key(|t| t.0);
    Ok(UnipotentParams { terms })
}

pub fn torus_to_json(group: &Group, h: &TorusParams) -> Value {
    Value::Array(h.eps.iter().map(|&e| group.ring.encode(e)).collect())
}

pub fn torus_from_json(group: &Group, v: &Value) -> Result<TorusParams> {
    let items = v.as_array().ok_or_else(|| Error::Parse("torus must be an array".into()))?;
    if items.len() != group.rank() {
        return Err(Error::Parse("torus has the wrong length".into()));
    }
    let eps = items.iter().map(|x| group.ring.decode(x)).collect::<Result<Vec<_>>>()?;
    if let Some(&bad) = eps.iter().find(|&&e| !group.ring.is_unit(e)) {
        return Err(Error::NotUnit(group.ring.show(bad)));
    }
    Ok(TorusParams { eps })
}

pub fn gauss_form_to_json(group: &Group, f: &GaussForm) -> Value {
    json!({
        "h": torus_to_json(group, &f.h),
        "u1": unipotent_to_json(group, &f.u1),
        "v": unipotent_to_json(group, &f.v),
        "u2": unipotent_to_json(group, &f.u2),
    })
}

pub fn gauss_form_from_json(group: &Group, v: &Value) -> Result<GaussForm> {
    let field = |k: &str| v.get(k).ok_or_else(|| Error::Parse(format!("missing field `{k}`")));
    Ok(GaussForm {
        h: torus_from_json(group, field("h")?)?,
        u1: unipotent_from_json(group, field("u1")?)?,
        v: unipotent_from_json(group, field("v")?)?,
        u2: unipotent_from_json(group, field("u2")?)?,
    })
}

pub fn unitri5_to_json(group: &Group, f: &Unitri5Form) -> Value {
    json!({ "blocks": f.blocks.iter().map(|b| unipotent_to_json(group, b)).collect::<Vec<_>>() })
}

pub fn unitri5_from_json(group: &Group, v: &Value) -> Result<Unitri5Form> {
    let blocks = v
        .get("blocks")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("missing field `blocks`".into()))?
        .iter()
        .map(|b| unipotent_from_json(group, b))
        .collect::<Result<Vec<_>>>()?;
    Ok(Unitri5Form { blocks })
}

fn gens_to_json(group: &Group, w: &Word) -> Value {
    word_to_json(group, w)["word"].clone()
}

pub fn uhv_to_json(group: &Group, f: &UhvForm) -> Value {
    json!({
        "conjugator": gens_to_json(group, &f.conjugator),
        "u": unipotent_to_json(group, &f.u),
        "h": torus_to_json(group, &f.h),
        "v": unipotent_to_json(group, &f.v),
    })
}

pub fn uhv_from_json(group: &Group, v: &Value) -> Result<UhvForm> {
    let field = |k: &str| v.get(k).ok_or_else(|| Error::Parse(format!("missing field `{k}`")));
    let doc = json!({
        "system": SystemDesc::of(group.system().cartan_type()),
        "ring": group.ring.to_string(),
        "word": field("conjugator")?,
    });
    let (_, conjugator) = word_from_json(&doc)?;
    Ok(UhvForm {
        conjugator,
        u: unipotent_from_json(group, field("u")?)?,
        h: torus_from_json(group, field("h")?)?,
        v: unipotent_from_json(group, field("v")?)?,
    })
}

/// One row of the commutator table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstantRow {
    pub alpha: Vec<i32>,
    pub beta: Vec<i32>,
    pub i: u8,
    pub j: u8,
    pub gamma: Vec<i32>,
    pub coeff: i64,
}

/// All commutator rows, pairs in root-id order.
pub fn constant_rows(group: &Group) -> Vec<ConstantRow> {
    let rs = group.system();
    let sc = group.constants();
    let mut out = Vec::new();
    for a in rs.roots() {
        for b in rs.roots() {
            for row in sc.rows(a, b) {
                out.push(ConstantRow {
                    alpha: rs.vector(a).to_vec(),
                    beta: rs.vector(b).to_vec(),
                    i: row.i,
                    j: row.j,
                    gamma: rs.vector(row.gamma).to_vec(),
                    coeff: row.coeff,
                });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauss::{conjugate_to_uhv, gauss_decompose, unitriangular5};

    #[test]
    fn word_document_example_parses() {
        let text = r#"{"system":{"type":"A","rank":2},"ring":"zmod:6","word":[{"gen":"x","root":[1,0],"param":"4"},{"gen":"h","root":[0,1],"param":"5"}]}"#;
        let v: Value = serde_json::from_str(text).unwrap();
        let (g, w) = word_from_json(&v).unwrap();
        assert_eq!(w.len(), 2);
        assert_eq!(w.gens[1].kind, GenKind::H);
        assert_eq!(word_to_json(&g, &w), v);
    }

    #[test]
    fn bad_documents_are_rejected() {
        let bad_root = json!({"system":{"type":"A","rank":2},"ring":"zmod:6","word":[{"gen":"x","root":[1,2],"param":"1"}]});
        assert!(matches!(word_from_json(&bad_root), Err(Error::UnknownRoot(_))));
        let non_unit = json!({"system":{"type":"A","rank":2},"ring":"zmod:6","word":[{"gen":"h","root":[1,0],"param":"2"}]});
        assert!(matches!(word_from_json(&non_unit), Err(Error::NotUnit(_))));
        let bad_type = json!({"system":{"type":"Q","rank":2},"ring":"zmod:6","word":[]});
        assert!(matches!(word_from_json(&bad_type), Err(Error::InvalidType(_))));
    }

    #[test]
    fn forms_round_trip() {
        let v = json!({"system":{"type":"B","rank":2},"ring":"prod:zmod:4,gf:3","word":[
            {"gen":"x","root":[-1,-1],"param":["3","2"]},
            {"gen":"w","root":[1,2],"param":["1","2"]},
            {"gen":"x","root":[0,-1],"param":["2","1"]}]});
        let (g, w) = word_from_json(&v).unwrap();
        let f = gauss_decompose(&g, &w).unwrap();
        assert_eq!(gauss_form_from_json(&g, &gauss_form_to_json(&g, &f)).unwrap(), f);
        let u = unitriangular5(&g, &w).unwrap();
        assert_eq!(unitri5_from_json(&g, &unitri5_to_json(&g, &u)).unwrap(), u);
        let c = conjugate_to_uhv(&g, &w).unwrap();
        assert_eq!(uhv_from_json(&g, &uhv_to_json(&g, &c)).unwrap(), c);
    }

    #[test]
    fn constant_rows_serialise() {
        let g = Group::new("A2".parse().unwrap(), "gf:5".parse().unwrap());
        let rows = constant_rows(&g);
        // each of the six roots is a sum of roots in exactly one unordered way
        assert_eq!(rows.len(), 12);
        let back: Vec<ConstantRow> = serde_json::from_value(serde_json::to_value(&rows).unwrap()).unwrap();
        assert_eq!(back, rows);
    }
}
