use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::linalg::IntegerMatrix;
use crate::mapping_class::{MappingClass, SymplecticMatrix};
use crate::words::{Alphabet, GroupAutomorphism, GroupWord, SurfacePresentation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BaseGroup {
    Free(usize),
    Surface(usize),
}

impl BaseGroup {
    /// Number of generators: `n` or `2h`.
    pub fn rank(self) -> usize {
        match self {
            BaseGroup::Free(n) => n,
            BaseGroup::Surface(h) => 2 * h,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Monodromy {
    Class(MappingClass),
    Symplectic(SymplecticMatrix),
}

impl Monodromy {
    pub fn symplectic(&self) -> &SymplecticMatrix {
        match self {
            Monodromy::Class(c) => &c.symplectic,
            Monodromy::Symplectic(s) => s,
        }
    }

    pub fn automorphism(&self) -> Option<&GroupAutomorphism> {
        match self {
            Monodromy::Class(c) => Some(&c.automorphism),
            Monodromy::Symplectic(_) => None,
        }
    }
}

/// Fiber genus, base group and one monodromy per base generator.
///
/// The monodromy is a left action: the base word `u·v` acts as `φ_u ∘ φ_v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonodromySpec {
    fiber_genus: usize,
    base: BaseGroup,
    monodromies: Vec<Monodromy>,
}

fn commutator_product(mats: &[IntegerMatrix], inverses: &[IntegerMatrix]) -> Result<IntegerMatrix> {
    let mut acc = IntegerMatrix::identity(mats[0].rows());
    for i in 0..mats.len() / 2 {
        let (x, y) = (2 * i, 2 * i + 1);
        for m in [&mats[x], &mats[y], &inverses[x], &inverses[y]] {
            acc = acc.mul(m)?;
        }
    }
    Ok(acc)
}

impl MonodromySpec {
    pub fn new(fiber_genus: usize, base: BaseGroup, monodromies: Vec<Monodromy>) -> Result<Self> {
        if fiber_genus < 2 {
            return Err(Error::Invalid(format!("fiber genus {fiber_genus} < 2")));
        }
        if base.rank() == 0 {
            return Err(Error::Invalid("base group must have at least one generator".into()));
        }
        if monodromies.len() != base.rank() {
            return Err(Error::DimensionMismatch(format!(
                "{} monodromies for a base with {} generators",
                monodromies.len(),
                base.rank()
            )));
        }
        for (i, m) in monodromies.iter().enumerate() {
            if m.symplectic().genus() != fiber_genus {
                return Err(Error::DimensionMismatch(format!(
                    "monodromies[{i}] has genus {}, expected {fiber_genus}",
                    m.symplectic().genus()
                )));
            }
        }
        let spec = Self {
            fiber_genus,
            base,
            monodromies,
        };
        if let BaseGroup::Surface(_) = base {
            let mats = spec.symplectic_matrices();
            let inv = spec.inverse_symplectic_matrices();
            if !commutator_product(&mats, &inv)?.is_identity() {
                return Err(Error::Invalid(
                    "monodromy does not respect the base surface relation on homology".into(),
                ));
            }
        }
        Ok(spec)
    }

    pub fn fiber_genus(&self) -> usize {
        self.fiber_genus
    }

    pub fn base(&self) -> BaseGroup {
        self.base
    }

    pub fn monodromies(&self) -> &[Monodromy] {
        &self.monodromies
    }

    pub fn symplectic_matrices(&self) -> Vec<IntegerMatrix> {
        self.monodromies.iter().map(|m| m.symplectic().matrix().clone()).collect()
    }

    pub fn inverse_symplectic_matrices(&self) -> Vec<IntegerMatrix> {
        self.monodromies
            .iter()
            .map(|m| m.symplectic().inverse().into_matrix())
            .collect()
    }

    /// Automorphism-level monodromies, if every entry carries one.
    pub fn automorphisms(&self) -> Option<Vec<&GroupAutomorphism>> {
        self.monodromies.iter().map(Monodromy::automorphism).collect()
    }

    /// Automorphisms, additionally requiring that a surface base relation
    /// holds on the nose in `Aut(K)`, as the split model needs.
    pub fn split_automorphisms(&self) -> Result<Vec<&GroupAutomorphism>> {
        let autos = self.automorphisms().ok_or_else(|| {
            Error::Invalid("automorphism-level monodromy data is required".into())
        })?;
        if let BaseGroup::Surface(h) = self.base {
            let rank = 2 * self.fiber_genus;
            let mut acc = GroupAutomorphism::identity(rank);
            for i in 0..h {
                let (x, y) = (autos[2 * i], autos[2 * i + 1]);
                for f in [x.clone(), y.clone(), x.inverse(), y.inverse()] {
                    acc = acc.compose(&f)?;
                }
            }
            if !acc.is_identity_on_generators(&SurfacePresentation::new(self.fiber_genus)) {
                return Err(Error::Invalid(
                    "the base surface relation is not the identity automorphism; fiber covers need an exact lift".into(),
                ));
            }
        }
        Ok(autos)
    }

    /// `φ_w` applied to a fiber word, letter by letter from the right.
    pub fn act(&self, base_word: &GroupWord, fiber_word: &GroupWord) -> Result<GroupWord> {
        let autos = self.split_automorphisms()?;
        let mut w = fiber_word.clone();
        for l in base_word.letters().iter().rev() {
            let f = autos.get(l.generator as usize).ok_or(Error::IndexOutOfRange {
                index: l.generator as usize,
                rank: autos.len(),
            })?;
            w = if l.inverse { f.apply_inverse(&w)? } else { f.apply(&w)? };
        }
        Ok(w)
    }

    /// `φ_w⁻¹` applied to a fiber word.
    pub fn act_inverse(&self, base_word: &GroupWord, fiber_word: &GroupWord) -> Result<GroupWord> {
        self.act(&base_word.inverse(), fiber_word)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: SpecFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("monodromy file: {e}")))?;
        file.into_spec()
    }

    pub fn to_json(&self) -> String {
        let file = SpecFile::from_spec(self);
        let mut s = serde_json::to_string_pretty(&file).expect("serializable");
        s.push('\n');
        s
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecFile {
    fiber_genus: usize,
    base: BaseGroup,
    monodromies: Vec<Value>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AutomorphismFile {
    images: BTreeMap<String, String>,
    inverse_images: BTreeMap<String, String>,
}

fn word_table(genus: usize, table: &BTreeMap<String, String>, field: &str) -> Result<Vec<GroupWord>> {
    let rank = 2 * genus;
    let mut out: Vec<GroupWord> = (0..rank as u32).map(GroupWord::generator).collect();
    for (name, text) in table {
        let g = Alphabet::Fiber
            .parse_generator(name)
            .map_err(|e| Error::Parse(format!("{field}: {e}")))? as usize;
        if g >= rank {
            return Err(Error::Parse(format!("{field}: generator `{name}` beyond genus {genus}")));
        }
        let w = Alphabet::Fiber
            .parse_word(text)
            .map_err(|e| Error::Parse(format!("{field}.{name}: {e}")))?;
        if w.generator_bound() as usize > rank {
            return Err(Error::Parse(format!("{field}.{name}: word uses generators beyond genus {genus}")));
        }
        out[g] = w;
    }
    Ok(out)
}

fn parse_entry(genus: usize, i: usize, v: Value) -> Result<Monodromy> {
    let field = format!("monodromies[{i}]");
    let Value::Object(map) = v else {
        return Err(Error::Parse(format!("{field}: expected an object")));
    };
    if map.len() != 1 {
        return Err(Error::Parse(format!(
            "{field}: expected exactly one of `symplectic` or `automorphism`"
        )));
    }
    let (key, body) = map.into_iter().next().expect("one entry");
    match key.as_str() {
        "symplectic" => {
            let rows: Vec<Vec<i64>> = serde_json::from_value(body)
                .map_err(|e| Error::Parse(format!("{field}.symplectic: {e}")))?;
            let n = 2 * genus;
            if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                return Err(Error::Parse(format!("{field}.symplectic: expected a {n}x{n} matrix")));
            }
            let m = IntegerMatrix::from_rows(&rows);
            SymplecticMatrix::new(m, genus)
                .map(Monodromy::Symplectic)
                .map_err(|e| Error::Parse(format!("{field}.symplectic: {e}")))
        }
        "automorphism" => {
            let a: AutomorphismFile = serde_json::from_value(body)
                .map_err(|e| Error::Parse(format!("{field}.automorphism: {e}")))?;
            let images = word_table(genus, &a.images, &format!("{field}.automorphism.images"))?;
            let inverse = word_table(
                genus,
                &a.inverse_images,
                &format!("{field}.automorphism.inverse_images"),
            )?;
            let auto = GroupAutomorphism::new(images, inverse)?;
            let class = MappingClass::from_automorphism(format!("m{}", i + 1), auto, genus)
                .map_err(|e| Error::Parse(format!("{field}.automorphism: {e}")))?;
            if !class.automorphism.verify_surface(&SurfacePresentation::new(genus)) {
                return Err(Error::Parse(format!(
                    "{field}.automorphism: not an automorphism of the genus-{genus} surface group"
                )));
            }
            Ok(Monodromy::Class(class))
        }
        other => Err(Error::Parse(format!("{field}: unknown entry kind `{other}`"))),
    }
}

impl SpecFile {
    fn into_spec(self) -> Result<MonodromySpec> {
        if self.fiber_genus < 2 {
            return Err(Error::Parse(format!("fiber_genus: {} < 2", self.fiber_genus)));
        }
        let monodromies = self
            .monodromies
            .into_iter()
            .enumerate()
            .map(|(i, v)| parse_entry(self.fiber_genus, i, v))
            .collect::<Result<Vec<_>>>()?;
        MonodromySpec::new(self.fiber_genus, self.base, monodromies)
    }

    fn from_spec(spec: &MonodromySpec) -> Self {
        let table = |words: &[GroupWord]| -> BTreeMap<String, String> {
            words
                .iter()
                .enumerate()
                .filter(|(g, w)| **w != GroupWord::generator(*g as u32))
                .map(|(g, w)| (Alphabet::Fiber.name(g as u32), Alphabet::Fiber.format_word(w)))
                .collect()
        };
        let monodromies = spec
            .monodromies
            .iter()
            .map(|m| match m {
                Monodromy::Class(c) => serde_json::json!({
                    "automorphism": AutomorphismFile {
                        images: table(c.automorphism.images()),
                        inverse_images: table(c.automorphism.inverse_images()),
                    }
                }),
                Monodromy::Symplectic(s) => {
                    let rows: Vec<Vec<Value>> = s
                        .matrix()
                        .to_rows()
                        .iter()
                        .map(|r| r.iter().map(big_to_json).collect())
                        .collect();
                    serde_json::json!({ "symplectic": rows })
                }
            })
            .collect();
        SpecFile {
            fiber_genus: spec.fiber_genus,
            base: spec.base,
            monodromies,
        }
    }
}

/// JSON number when it fits in 64 bits, decimal string otherwise.
pub(crate) fn big_to_json(x: &BigInt) -> Value {
    i64::try_from(x)
        .map(Value::from)
        .unwrap_or_else(|_| Value::String(x.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mapping_class::{chain_periodic_element, transvection};

    #[test]
    fn json_round_trip() {
        let x = chain_periodic_element(2).unwrap();
        let t = transvection(&[1, 0, 0, 0]).unwrap();
        let spec = MonodromySpec::new(
            2,
            BaseGroup::Free(2),
            vec![Monodromy::Class(x), Monodromy::Symplectic(t)],
        )
        .unwrap();
        let text = spec.to_json();
        let back = MonodromySpec::from_json(&text).unwrap();
        assert_eq!(back.symplectic_matrices(), spec.symplectic_matrices());
        assert_eq!(back.to_json(), text);
    }

    #[test]
    fn rejects_bad_files() {
        let bad = r#"{"fiber_genus":2,"base":{"free":1},"monodromies":[{"symplectic":[[2,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]]}]}"#;
        let err = MonodromySpec::from_json(bad).unwrap_err();
        assert!(err.to_string().contains("monodromies[0].symplectic"), "{err}");
        let count = r#"{"fiber_genus":2,"base":{"free":2},"monodromies":[]}"#;
        assert!(MonodromySpec::from_json(count).is_err());
        let kill = r#"{"fiber_genus":2,"base":{"free":1},"monodromies":[{"automorphism":{"images":{"a1":"1"},"inverse_images":{}}}]}"#;
        assert!(MonodromySpec::from_json(kill).is_err());
        assert!(MonodromySpec::from_json("{").is_err());
    }

    #[test]
    fn surface_base_relation() {
        let id = Monodromy::Symplectic(SymplecticMatrix::identity(2));
        let t = Monodromy::Symplectic(transvection(&[1, 0, 0, 0]).unwrap());
        let u = Monodromy::Symplectic(transvection(&[0, 1, 0, 0]).unwrap());
        assert!(MonodromySpec::new(2, BaseGroup::Surface(1), vec![t.clone(), id]).is_ok());
        assert!(MonodromySpec::new(2, BaseGroup::Surface(1), vec![t, u]).is_err());
    }
}
