use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::ffield::Field;

use super::Mat3;

/// Default bound on the number of elements a closure may produce.
pub const DEFAULT_CLOSURE_CAP: usize = 10_000_000;

/// A finite matrix group, stored as its full element list.
#[derive(Clone, Debug)]
pub struct GroupSet {
    elements: Vec<Mat3>,
    index: HashMap<Mat3, usize>,
    generators: Vec<Mat3>,
}

impl GroupSet {
    /// Wraps an element list that is already known to be a group.
    pub(crate) fn from_parts(elements: Vec<Mat3>, generators: Vec<Mat3>) -> GroupSet {
        let index = elements.iter().enumerate().map(|(i, g)| (*g, i)).collect();
        GroupSet {
            elements,
            index,
            generators,
        }
    }

    pub fn trivial() -> GroupSet {
        GroupSet::from_parts(vec![Mat3::IDENTITY], Vec::new())
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, g: &Mat3) -> bool {
        self.index.contains_key(g)
    }

    /// Elements in discovery order.
    pub fn elements(&self) -> &[Mat3] {
        &self.elements
    }

    pub fn generators(&self) -> &[Mat3] {
        &self.generators
    }

    pub fn iter(&self) -> impl Iterator<Item = &Mat3> {
        self.elements.iter()
    }

    /// Elements ordered by canonical encoding, for golden output.
    pub fn sorted_elements(&self) -> Vec<Mat3> {
        let mut out = self.elements.clone();
        out.sort_unstable();
        out
    }

    pub fn intersection_len(&self, other: &GroupSet) -> usize {
        let (small, large) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        small.iter().filter(|g| large.contains(g)).count()
    }

    pub fn is_subset_of(&self, other: &GroupSet) -> bool {
        self.iter().all(|g| other.contains(g))
    }

    /// Checks closure under multiplication and inverses by brute force.
    pub fn is_closed(&self, field: &Field) -> bool {
        self.contains(&Mat3::IDENTITY)
            && self.iter().all(|a| {
                a.inverse(field).is_ok_and(|ai| self.contains(&ai))
                    && self.iter().all(|b| self.contains(&a.mul(b, field)))
            })
    }

    pub fn is_abelian(&self, field: &Field) -> bool {
        self.iter()
            .all(|a| self.iter().all(|b| a.mul(b, field) == b.mul(a, field)))
    }

    /// Elements acting trivially on the invariant plane.
    pub fn restriction_kernel(&self) -> Vec<Mat3> {
        self.iter()
            .filter(|g| g.has_identity_block())
            .copied()
            .collect()
    }
}

impl PartialEq for GroupSet {
    fn eq(&self, other: &GroupSet) -> bool {
        self.len() == other.len() && self.is_subset_of(other)
    }
}

/// Breadth-first closure of `gens` under right multiplication.
///
/// Element order is the BFS discovery order starting from the identity,
/// expanding generators in the order given.
pub fn closure(field: &Field, gens: &[Mat3], cap: usize) -> Result<GroupSet> {
    for g in gens {
        if !g.entries_in(field) {
            return Err(Error::ForeignElement(format!("generator {g:?}")));
        }
        if g.block_det(field).is_zero() {
            return Err(Error::Singular);
        }
    }
    let mut elements = vec![Mat3::IDENTITY];
    let mut index = HashMap::new();
    index.insert(Mat3::IDENTITY, 0usize);
    let mut queue = VecDeque::from([Mat3::IDENTITY]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = x.mul(g, field);
            if let std::collections::hash_map::Entry::Vacant(e) = index.entry(y) {
                if elements.len() >= cap {
                    return Err(Error::ClosureCap(cap));
                }
                e.insert(elements.len());
                elements.push(y);
                queue.push_back(y);
            }
        }
    }
    Ok(GroupSet {
        elements,
        index,
        generators: gens.to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::Fel;

    #[test]
    fn closure_respects_cap() {
        let f = Field::with_default_modulus(2).unwrap();
        let s = Mat3::from_block(
            [[Fel::ONE, Fel::ONE], [Fel::ZERO, Fel::ONE]],
            [Fel::ZERO; 2],
        );
        let t = Mat3::from_block(
            [[Fel::ONE, Fel::ZERO], [Fel::ONE, Fel::ONE]],
            [Fel::ZERO; 2],
        );
        let g = closure(&f, &[s, t], 100).unwrap();
        assert_eq!(g.len(), 6);
        assert!(g.is_closed(&f));
        assert!(matches!(closure(&f, &[s, t], 5), Err(Error::ClosureCap(5))));
        assert_eq!(closure(&f, &[], 1).unwrap().len(), 1);
    }
}
