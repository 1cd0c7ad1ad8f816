use crate::error::{Error, Result};
use crate::geometry::{intersect_1d, Interval, MatchReport, Region, Role};
use crate::interval_tree::IntervalTree;
use crate::matchers::check_region_sets;

/// Dynamic region management backed by two interval trees, one per role,
/// keyed on the first dimension. Moving a region deletes and re-inserts it
/// in its tree and queries the opposite tree for its new overlaps; any
/// further dimensions are filtered with the 1-D predicate.
///
/// Updates need `&mut self`; overlap queries between updates take `&self`.
#[derive(Clone, Debug)]
pub struct DynSession {
    dims: usize,
    subs: Vec<Vec<Interval>>,
    upds: Vec<Vec<Interval>>,
    sub_tree: IntervalTree,
    upd_tree: IntervalTree,
}

impl DynSession {
    pub fn new(subs: &[Region], upds: &[Region]) -> Result<Self> {
        let dims = check_region_sets(subs, upds)?.unwrap_or(1);
        let by_id = |regions: &[Region]| {
            let mut out = vec![Vec::new(); regions.len()];
            for r in regions {
                out[r.id as usize] = r.extents.clone();
            }
            out
        };
        let subs = by_id(subs);
        let upds = by_id(upds);
        let tree = |set: &[Vec<Interval>]| {
            IntervalTree::build(set.iter().enumerate().map(|(i, ext)| (ext[0], i as u32)))
        };
        Ok(Self {
            dims,
            sub_tree: tree(&subs),
            upd_tree: tree(&upds),
            subs,
            upds,
        })
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn extents(&self, role: Role, id: u32) -> Result<&[Interval]> {
        self.set(role)
            .get(id as usize)
            .map(Vec::as_slice)
            .ok_or(Error::UnknownRegion { role, id })
    }

    fn set(&self, role: Role) -> &[Vec<Interval>] {
        match role {
            Role::Subscription => &self.subs,
            Role::Update => &self.upds,
        }
    }

    /// Current overlaps of one region, as `(subscription, update)` pairs.
    pub fn overlaps_of(&self, role: Role, id: u32) -> Result<MatchReport> {
        let extents = self.extents(role, id)?;
        let (other_tree, other_set) = match role {
            Role::Subscription => (&self.upd_tree, &self.upds),
            Role::Update => (&self.sub_tree, &self.subs),
        };
        let mut pairs = Vec::new();
        other_tree.query_overlaps(&extents[0], |k| {
            let rest_overlap = extents[1..]
                .iter()
                .zip(&other_set[k as usize][1..])
                .all(|(a, b)| intersect_1d(a, b));
            if rest_overlap {
                pairs.push(match role {
                    Role::Subscription => (id, k),
                    Role::Update => (k, id),
                });
            }
        });
        Ok(MatchReport::from_pairs(pairs))
    }

    /// Moves or resizes a region and returns all of its overlaps afterwards.
    pub fn update_region(&mut self, role: Role, id: u32, extents: Vec<Interval>) -> Result<MatchReport> {
        if extents.len() != self.dims {
            return Err(Error::DimensionMismatch {
                expected: self.dims,
                found: extents.len(),
            });
        }
        if let Some(bad) = extents.iter().find(|iv| !iv.is_valid()) {
            return Err(Error::InvalidInterval {
                lower: bad.lower(),
                upper: bad.upper(),
            });
        }
        let (set, tree) = match role {
            Role::Subscription => (&mut self.subs, &mut self.sub_tree),
            Role::Update => (&mut self.upds, &mut self.upd_tree),
        };
        let slot = set
            .get_mut(id as usize)
            .ok_or(Error::UnknownRegion { role, id })?;
        tree.delete(&slot[0], id)?;
        tree.insert(extents[0], id);
        *slot = extents;
        self.overlaps_of(role, id)
    }

    #[cfg(test)]
    pub(crate) fn check_trees(&self) {
        self.sub_tree.check_invariants().unwrap();
        self.upd_tree.check_invariants().unwrap();
        assert_eq!(self.sub_tree.len(), self.subs.len());
        assert_eq!(self.upd_tree.len(), self.upds.len());
    }
}
