//! Quivers and paths. Vertices are 0-based internally and 1-based in files
//! and printed output. Paths compose left to right: `ab` is `a` then `b`.

use std::collections::VecDeque;
use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Arrow {
    pub id: String,
    pub source: usize,
    pub target: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Quiver {
    vertex_count: usize,
    arrows: Vec<Arrow>,
}

impl Quiver {
    pub fn new(vertex_count: usize, arrows: Vec<Arrow>) -> Result<Self> {
        if vertex_count == 0 {
            return Err(Error::InvalidPresentation(
                "quiver needs at least one vertex".into(),
            ));
        }
        for (k, a) in arrows.iter().enumerate() {
            if a.source >= vertex_count || a.target >= vertex_count {
                return Err(Error::InvalidPresentation(format!(
                    "arrow {} has an endpoint outside 1..{vertex_count}",
                    a.id
                )));
            }
            if a.id.is_empty() {
                return Err(Error::InvalidPresentation("empty arrow id".into()));
            }
            if arrows[..k].iter().any(|b| b.id == a.id) {
                return Err(Error::InvalidPresentation(format!(
                    "duplicate arrow id {}",
                    a.id
                )));
            }
        }
        Ok(Quiver {
            vertex_count,
            arrows,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow(&self, k: usize) -> &Arrow {
        &self.arrows[k]
    }

    pub fn arrow_index(&self, id: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.id == id)
    }

    pub fn arrows_from(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.arrows.len()).filter(move |&k| self.arrows[k].source == v)
    }

    pub fn arrows_to(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.arrows.len()).filter(move |&k| self.arrows[k].target == v)
    }

    pub fn has_loop_at(&self, v: usize) -> bool {
        self.arrows.iter().any(|a| a.source == v && a.target == v)
    }

    /// Number of arrows `i -> j`.
    pub fn arrow_count(&self, i: usize, j: usize) -> usize {
        self.arrows
            .iter()
            .filter(|a| a.source == i && a.target == j)
            .count()
    }

    pub fn is_connected(&self) -> bool {
        let n = self.vertex_count;
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(v) = queue.pop_front() {
            for a in &self.arrows {
                let next = if a.source == v {
                    a.target
                } else if a.target == v {
                    a.source
                } else {
                    continue;
                };
                if !seen[next] {
                    seen[next] = true;
                    queue.push_back(next);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn path_target(&self, path: &Path) -> usize {
        path.arrows
            .last()
            .map_or(path.source, |&a| self.arrows[a].target)
    }

    /// Parse a path from arrow ids. An empty list is rejected (no source).
    pub fn path_from_ids(&self, ids: &[String]) -> Result<Path> {
        let first = ids
            .first()
            .ok_or_else(|| Error::InvalidPresentation("empty path".into()))?;
        let mut arrows = Vec::with_capacity(ids.len());
        for id in ids {
            arrows.push(
                self.arrow_index(id)
                    .ok_or_else(|| Error::InvalidPresentation(format!("unknown arrow {id}")))?,
            );
        }
        let source = self.arrows[self.arrow_index(first).unwrap()].source;
        let path = Path { source, arrows };
        self.check_path(&path)?;
        Ok(path)
    }

    pub fn check_path(&self, path: &Path) -> Result<()> {
        let mut at = path.source;
        for &a in &path.arrows {
            let arrow = &self.arrows[a];
            if arrow.source != at {
                return Err(Error::InvalidPresentation(format!(
                    "path {} does not compose at arrow {}",
                    self.fmt_path(path),
                    arrow.id
                )));
            }
            at = arrow.target;
        }
        Ok(())
    }

    pub fn path_ids(&self, path: &Path) -> Vec<String> {
        path.arrows
            .iter()
            .map(|&a| self.arrows[a].id.clone())
            .collect()
    }

    pub fn fmt_path(&self, path: &Path) -> String {
        if path.arrows.is_empty() {
            format!("e{}", path.source + 1)
        } else {
            self.path_ids(path).join("·")
        }
    }
}

/// A path in a quiver, stored as a source vertex and arrow indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    pub source: usize,
    pub arrows: Vec<usize>,
}

impl Path {
    pub fn trivial(v: usize) -> Self {
        Path {
            source: v,
            arrows: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    /// Concatenation; caller guarantees composability.
    pub fn concat(&self, other: &Path) -> Path {
        let mut arrows = self.arrows.clone();
        arrows.extend_from_slice(&other.arrows);
        Path {
            source: self.source,
            arrows,
        }
    }

    /// Degree first, then arrow indices lexicographically.
    pub fn deglex_key(&self) -> (usize, &[usize]) {
        (self.arrows.len(), &self.arrows)
    }

    pub fn contains_subpath(&self, sub: &[usize]) -> bool {
        !sub.is_empty() && self.arrows.windows(sub.len()).any(|w| w == sub)
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.arrows.is_empty() {
            write!(f, "e{}", self.source + 1)
        } else {
            let parts: Vec<String> = self.arrows.iter().map(|a| format!("#{a}")).collect();
            write!(f, "{}", parts.join("."))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle2() -> Quiver {
        Quiver::new(
            2,
            vec![
                Arrow {
                    id: "a".into(),
                    source: 0,
                    target: 1,
                },
                Arrow {
                    id: "b".into(),
                    source: 1,
                    target: 0,
                },
            ],
        )
        .unwrap()
    }

    #[test]
    fn connectivity() {
        assert!(cycle2().is_connected());
        let q = Quiver::new(2, vec![]).unwrap();
        assert!(!q.is_connected());
    }

    #[test]
    fn path_composition_is_checked() {
        let q = cycle2();
        assert!(q.path_from_ids(&["a".into(), "b".into()]).is_ok());
        assert!(q.path_from_ids(&["a".into(), "a".into()]).is_err());
        let p = q
            .path_from_ids(&["a".into(), "b".into(), "a".into()])
            .unwrap();
        assert_eq!(q.path_target(&p), 1);
    }

    #[test]
    fn duplicate_ids_rejected() {
        let arrows = vec![
            Arrow {
                id: "a".into(),
                source: 0,
                target: 0,
            },
            Arrow {
                id: "a".into(),
                source: 0,
                target: 0,
            },
        ];
        assert!(Quiver::new(1, arrows).is_err());
    }
}
