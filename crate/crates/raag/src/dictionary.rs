//! Passing between flat-preserving maps of the group and automorphisms of
//! the building, restricted to finite windows.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::building::HatElement;
use crate::error::{Error, Result};
use crate::flats::{StandardCoset, StandardFlat};
use crate::graph::VertexSet;
use crate::words::{Raag, Word};

/// A partially defined self-map of the group.
pub trait PointMap {
    fn apply(&self, raag: &Raag, x: &Word) -> Option<Word>;
}

/// Left translation `x ↦ g·x`.
pub struct Translation(pub Word);

impl PointMap for Translation {
    fn apply(&self, raag: &Raag, x: &Word) -> Option<Word> {
        Some(raag.multiply(&self.0, x))
    }
}

impl PointMap for HatElement {
    fn apply(&self, raag: &Raag, x: &Word) -> Option<Word> {
        Some(raag.hat_on_point(self, x))
    }
}

/// A map given by a finite table.
#[derive(Clone, Debug, Default)]
pub struct TableMap(pub HashMap<Word, Word>);

impl PointMap for TableMap {
    fn apply(&self, _: &Raag, x: &Word) -> Option<Word> {
        self.0.get(x).cloned()
    }
}

impl<F: Fn(&Raag, &Word) -> Option<Word>> PointMap for F {
    fn apply(&self, raag: &Raag, x: &Word) -> Option<Word> {
        self(raag, x)
    }
}

/// A rank-preserving bijection between finitely many flats.
#[derive(Clone, Debug, Default)]
pub struct PartialAutomorphism {
    pub pairs: BTreeMap<StandardFlat, StandardFlat>,
}

impl PartialAutomorphism {
    pub fn get(&self, f: &StandardFlat) -> Option<&StandardFlat> {
        self.pairs.get(f)
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn preserves_rank(&self) -> bool {
        self.pairs.iter().all(|(a, b)| a.dim() == b.dim())
    }

    pub fn is_injective(&self) -> bool {
        self.pairs.values().collect::<BTreeSet<_>>().len() == self.pairs.len()
    }
}

impl Raag {
    /// The smallest standard coset containing every point of `points`.
    pub fn span(&self, points: &[Word]) -> Option<StandardCoset> {
        let first = points.iter().min()?;
        let ty = points.iter().fold(VertexSet::EMPTY, |t, p| t.union(self.left_quotient(first, p).support()));
        Some(self.coset(first, ty))
    }

    /// The flat map induced by a point map on `window`: defined on the flats
    /// spanned by their points in the window, sending each such flat to the
    /// span of the image points. Fails with a witness flat when an image
    /// span is not a flat of the same dimension.
    pub fn fp_to_auto(&self, map: &dyn PointMap, window: &[Word]) -> Result<PartialAutomorphism> {
        let points: BTreeSet<Word> = window.iter().cloned().collect();
        let mut image = HashMap::new();
        for p in &points {
            let q = map.apply(self, p).ok_or_else(|| Error::Invalid(format!("map undefined at {}", self.display(p))))?;
            image.insert(p.clone(), q);
        }
        if image.values().collect::<BTreeSet<_>>().len() != image.len() {
            return Err(Error::Invalid("map is not injective on the window".into()));
        }
        let mut flats = BTreeSet::new();
        for p in &points {
            flats.extend(self.flats_through(p, false));
        }
        let mut pairs = BTreeMap::new();
        for f in flats {
            let inside: Vec<Word> = points.iter().filter(|p| self.member(&f, p)).cloned().collect();
            if self.span(&inside).as_ref() != Some(&f) {
                continue;
            }
            let imgs: Vec<Word> = inside.iter().map(|p| image[p].clone()).collect();
            let g = self.span(&imgs).expect("nonempty");
            if g.dim() != f.dim() || !self.graph().is_clique(g.ty) {
                return Err(Error::NotFlatPreserving(self.format_coset(&f)));
            }
            pairs.insert(f, g);
        }
        Ok(PartialAutomorphism { pairs })
    }

    /// Recovers the image of a point as the intersection of the images of
    /// the maximal flats through it, when they are all in the domain.
    pub fn theta_point(&self, auto: &PartialAutomorphism, p: &Word) -> Option<Word> {
        let mut acc: Option<StandardCoset> = None;
        for f in self.flats_through(p, true) {
            let img = auto.get(&f)?.clone();
            acc = Some(match acc {
                None => img,
                Some(a) => self.flat_intersection(&a, &img)?,
            });
        }
        acc.filter(|c| c.ty.is_empty()).map(|c| c.rep)
    }

    /// The point map of a partial automorphism: on rank-0 vertices of its
    /// domain, checked against the intersection of maximal-flat images
    /// where those are available.
    pub fn auto_to_fp(&self, auto: &PartialAutomorphism) -> Result<TableMap> {
        let mut table = HashMap::new();
        for (f, g) in &auto.pairs {
            if !f.ty.is_empty() {
                continue;
            }
            if let Some(q) = self.theta_point(auto, &f.rep) {
                if q != g.rep {
                    return Err(Error::NotFlatPreserving(self.format_coset(f)));
                }
            }
            table.insert(f.rep.clone(), g.rep.clone());
        }
        Ok(TableMap(table))
    }

    /// Whether the map respects inclusions among domain flats.
    pub fn preserves_order(&self, auto: &PartialAutomorphism) -> bool {
        let items: Vec<(&StandardFlat, &StandardFlat)> = auto.pairs.iter().collect();
        items.iter().all(|(a, ia)| {
            items.iter().all(|(b, ib)| !self.flat_leq(a, b) || self.flat_leq(ia, ib))
        })
    }
}
