//! Algebra presentations (quiver + relations) and their JSON file format.
//!
//! ```json
//! {"field": {"prime": 5}, "vertices": 2,
//!  "arrows": [{"id": "a", "source": 1, "target": 2}, {"id": "b", "source": 2, "target": 1}],
//!  "relations": [[{"coeff": 1, "path": ["a", "b", "a"]}], [{"coeff": 1, "path": ["b", "a", "b"]}]]}
//! ```
//!
//! Export is canonical: fixed key order, balanced `F_p` representatives,
//! reduced rationals. Re-exporting an exported file reproduces it exactly.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::field::{Field, FieldSpec, Fp, Rationals};
use crate::quiver::{Arrow, Path, Quiver};

#[derive(Clone, Debug, PartialEq)]
pub struct Term<F: Field> {
    pub coeff: F::Elem,
    pub path: Path,
}

/// A linear combination of parallel paths of length at least two.
#[derive(Clone, Debug, PartialEq)]
pub struct Relation<F: Field> {
    pub terms: Vec<Term<F>>,
}

impl<F: Field> Relation<F> {
    pub fn monomial(f: &F, path: Path) -> Self {
        Relation {
            terms: vec![Term {
                coeff: f.one(),
                path,
            }],
        }
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn source(&self) -> usize {
        self.terms[0].path.source
    }

    pub fn min_len(&self) -> usize {
        self.terms.iter().map(|t| t.path.len()).min().unwrap_or(0)
    }

    /// Merge repeated paths and drop zero coefficients; terms sorted deg-lex.
    pub fn collected(&self, f: &F) -> Relation<F> {
        let mut terms: Vec<Term<F>> = Vec::new();
        let mut sorted = self.terms.clone();
        sorted.sort_by(|a, b| a.path.deglex_key().cmp(&b.path.deglex_key()));
        for t in sorted {
            match terms.last_mut() {
                Some(last) if last.path == t.path => last.coeff = f.add(&last.coeff, &t.coeff),
                _ => terms.push(t),
            }
        }
        terms.retain(|t| !f.is_zero(&t.coeff));
        Relation { terms }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraPresentation<F: Field> {
    pub field: F,
    pub quiver: Quiver,
    pub relations: Vec<Relation<F>>,
    /// Free-form generator metadata (e.g. surface data for weighted surface algebras).
    pub meta: Option<Value>,
}

impl<F: Field> AlgebraPresentation<F> {
    pub fn new(field: F, quiver: Quiver, relations: Vec<Relation<F>>) -> Result<Self> {
        let pres = AlgebraPresentation {
            field,
            quiver,
            relations,
            meta: None,
        };
        pres.validate()?;
        Ok(pres)
    }

    pub fn with_meta(mut self, meta: Value) -> Self {
        self.meta = Some(meta);
        self
    }

    pub fn vertex_count(&self) -> usize {
        self.quiver.vertex_count()
    }

    /// Well-formedness of each relation (not admissibility, which needs the build).
    pub fn validate(&self) -> Result<()> {
        let f = &self.field;
        for (k, rel) in self.relations.iter().enumerate() {
            let Some(first) = rel.terms.first() else {
                return Err(Error::InvalidPresentation(format!(
                    "relation {} has no terms",
                    k + 1
                )));
            };
            let src = first.path.source;
            let tgt = self.quiver.path_target(&first.path);
            for t in &rel.terms {
                self.quiver.check_path(&t.path)?;
                if t.path.len() < 2 {
                    return Err(Error::InvalidPresentation(format!(
                        "relation {} has a term of length {} (need >= 2)",
                        k + 1,
                        t.path.len()
                    )));
                }
                if f.is_zero(&t.coeff) {
                    return Err(Error::InvalidPresentation(format!(
                        "relation {} has a zero coefficient",
                        k + 1
                    )));
                }
                if t.path.source != src || self.quiver.path_target(&t.path) != tgt {
                    return Err(Error::InvalidPresentation(format!(
                        "relation {} mixes paths with different endpoints",
                        k + 1
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn to_file(&self) -> AlgebraFile {
        let f = &self.field;
        AlgebraFile {
            field: f.spec().to_json(),
            vertices: self.quiver.vertex_count(),
            arrows: self
                .quiver
                .arrows()
                .iter()
                .map(|a| ArrowFile {
                    id: a.id.clone(),
                    source: a.source + 1,
                    target: a.target + 1,
                })
                .collect(),
            relations: self
                .relations
                .iter()
                .map(|r| {
                    r.terms
                        .iter()
                        .map(|t| TermFile {
                            coeff: f.to_json(&t.coeff),
                            path: self.quiver.path_ids(&t.path),
                        })
                        .collect()
                })
                .collect(),
            meta: self.meta.clone(),
        }
    }

    /// Human-readable relation, e.g. `alpha beta - 2 gamma delta`.
    pub fn fmt_relation(&self, r: &Relation<F>) -> String {
        let f = &self.field;
        let mut out = String::new();
        for (k, t) in r.terms.iter().enumerate() {
            let neg = f.fmt_elem(&t.coeff).starts_with('-');
            let c = if neg {
                f.neg(&t.coeff)
            } else {
                t.coeff.clone()
            };
            match (k, neg) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            if !f.is_one(&c) {
                out.push_str(&f.fmt_elem(&c));
                out.push(' ');
            }
            out.push_str(&self.quiver.fmt_path(&t.path));
        }
        out
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("serializable")
    }

    pub fn from_file(field: F, file: &AlgebraFile) -> Result<Self> {
        let arrows = file
            .arrows
            .iter()
            .map(|a| {
                if a.source == 0 || a.target == 0 {
                    return Err(Error::InvalidPresentation(format!(
                        "arrow {}: vertices are numbered from 1",
                        a.id
                    )));
                }
                Ok(Arrow {
                    id: a.id.clone(),
                    source: a.source - 1,
                    target: a.target - 1,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let quiver = Quiver::new(file.vertices, arrows)?;
        let mut relations = Vec::new();
        for rel in &file.relations {
            let mut terms = Vec::new();
            for t in rel {
                terms.push(Term {
                    coeff: field.from_json(&t.coeff)?,
                    path: quiver.path_from_ids(&t.path)?,
                });
            }
            relations.push(Relation { terms });
        }
        let mut pres = AlgebraPresentation::new(field, quiver, relations)?;
        pres.meta = file.meta.clone();
        Ok(pres)
    }
}

/// On-disk schema. Field order here is the canonical key order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraFile {
    pub field: Value,
    pub vertices: usize,
    pub arrows: Vec<ArrowFile>,
    pub relations: Vec<Vec<TermFile>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrowFile {
    pub id: String,
    pub source: usize,
    pub target: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermFile {
    pub coeff: Value,
    pub path: Vec<String>,
}

/// A presentation over whichever field the file names.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyPresentation {
    Prime(AlgebraPresentation<Fp>),
    Rational(AlgebraPresentation<Rationals>),
}

impl AnyPresentation {
    pub fn from_json_str(text: &str) -> Result<Self> {
        let file: AlgebraFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_file(&file)
    }

    pub fn from_file(file: &AlgebraFile) -> Result<Self> {
        match FieldSpec::from_json(&file.field)? {
            FieldSpec::Prime(p) => Ok(AnyPresentation::Prime(AlgebraPresentation::from_file(
                Fp::new(p)?,
                file,
            )?)),
            FieldSpec::Rational => Ok(AnyPresentation::Rational(AlgebraPresentation::from_file(
                Rationals, file,
            )?)),
        }
    }

    pub fn to_json_string(&self) -> String {
        match self {
            AnyPresentation::Prime(p) => p.to_json_string(),
            AnyPresentation::Rational(p) => p.to_json_string(),
        }
    }
}

impl From<AlgebraPresentation<Fp>> for AnyPresentation {
    fn from(p: AlgebraPresentation<Fp>) -> Self {
        AnyPresentation::Prime(p)
    }
}

impl From<AlgebraPresentation<Rationals>> for AnyPresentation {
    fn from(p: AlgebraPresentation<Rationals>) -> Self {
        AnyPresentation::Rational(p)
    }
}

/// Strip insignificant whitespace from a JSON text.
pub fn minify_json(text: &str) -> Result<String> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    Ok(v.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    const N23: &str = r#"{"field": {"prime": 5}, "vertices": 2,
        "arrows": [{"id": "a", "source": 1, "target": 2}, {"id": "b", "source": 2, "target": 1}],
        "relations": [[{"coeff": 1, "path": ["a", "b", "a"]}], [{"coeff": -1, "path": ["b", "a", "b"]}]]}"#;

    #[test]
    fn parse_and_reexport() {
        let p = AnyPresentation::from_json_str(N23).unwrap();
        let out = p.to_json_string();
        let v1: Value = serde_json::from_str(N23).unwrap();
        let v2: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v1, v2);
    }

    #[test]
    fn parse_error_has_position() {
        let err = AnyPresentation::from_json_str("{\"field\": ").unwrap_err();
        assert!(err.to_string().contains("line 1"));
    }

    #[test]
    fn bad_relations_rejected() {
        let short = N23.replace(r#"["a", "b", "a"]"#, r#"["a"]"#);
        assert!(AnyPresentation::from_json_str(&short).is_err());
        let broken = N23.replace(r#"["a", "b", "a"]"#, r#"["a", "a"]"#);
        assert!(AnyPresentation::from_json_str(&broken).is_err());
        let zero = N23.replace(r#""coeff": 1"#, r#""coeff": 5"#);
        assert!(AnyPresentation::from_json_str(&zero).is_err());
        let nonprime = N23.replace(r#"{"prime": 5}"#, r#"{"prime": 6}"#);
        assert!(AnyPresentation::from_json_str(&nonprime).is_err());
    }

    #[test]
    fn collected_merges_terms() {
        let f = Fp::new(5).unwrap();
        let p = Path {
            source: 0,
            arrows: vec![0, 1],
        };
        let r = Relation::<Fp> {
            terms: vec![
                Term {
                    coeff: 2,
                    path: p.clone(),
                },
                Term { coeff: 3, path: p },
            ],
        };
        assert!(r.collected(&f).terms.is_empty());
    }
}
