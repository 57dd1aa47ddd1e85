use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::Perm;

/// Points are 0-based; degrees beyond this are rejected outright.
pub const MAX_DEGREE: usize = 1 << 24;

/// One level of a stabilizer chain: the orbit of `point` under the group
/// generated by the strong generators fixing all earlier base points, with a
/// transversal `u_β` satisfying `point^{u_β} = β`.
#[derive(Clone)]
struct Level {
    point: usize,
    gens: Vec<Perm>,
    orbit: Vec<usize>,
    transversal: HashMap<usize, Perm>,
}

impl Level {
    fn new(point: usize, gens: Vec<Perm>, degree: usize) -> Self {
        let mut transversal = HashMap::new();
        let mut orbit = vec![point];
        transversal.insert(point, Perm::identity(degree));
        let mut head = 0;
        while head < orbit.len() {
            let b = orbit[head];
            head += 1;
            for g in &gens {
                let b2 = g.apply(b);
                if !transversal.contains_key(&b2) {
                    let u = transversal[&b].then(g);
                    transversal.insert(b2, u);
                    orbit.push(b2);
                }
            }
        }
        Level {
            point,
            gens,
            orbit,
            transversal,
        }
    }
}

#[derive(Clone)]
struct StabChain {
    strong: Vec<Perm>,
    levels: Vec<Level>,
}

impl StabChain {
    /// Deterministic Schreier–Sims. The base is re-derived from the strong
    /// set after every extension: each level's base point is the minimal
    /// point moved by that level's generators (after any forced prefix), so
    /// the base is strictly ascending past the prefix. Minimal-image coset
    /// canonicalization depends on that ordering.
    fn build(degree: usize, gens: &[Perm], forced_prefix: &[usize]) -> StabChain {
        let mut strong: Vec<Perm> = Vec::new();
        for g in gens {
            if !g.is_identity() && !strong.contains(g) {
                strong.push(g.clone());
            }
        }
        loop {
            let levels = Self::levels_from(degree, &strong, forced_prefix);
            let chain = StabChain {
                strong: strong.clone(),
                levels,
            };
            match chain.first_failure() {
                None => return chain,
                Some(residue) => strong.push(residue),
            }
        }
    }

    fn levels_from(degree: usize, strong: &[Perm], forced_prefix: &[usize]) -> Vec<Level> {
        let mut levels: Vec<Level> = Vec::new();
        let mut current: Vec<Perm> = strong.to_vec();
        for &pt in forced_prefix {
            if current.is_empty() {
                break;
            }
            levels.push(Level::new(pt, current.clone(), degree));
            current.retain(|g| g.apply(pt) == pt);
        }
        while !current.is_empty() {
            let pt = current
                .iter()
                .filter_map(|g| g.min_moved())
                .min()
                .expect("non-identity generators move a point");
            levels.push(Level::new(pt, current.clone(), degree));
            current.retain(|g| g.apply(pt) == pt);
        }
        levels
    }

    /// Bottom-up Schreier verification: returns a nontrivial sift residue of
    /// some Schreier generator, or `None` when the chain is complete.
    fn first_failure(&self) -> Option<Perm> {
        for i in (0..self.levels.len()).rev() {
            let level = &self.levels[i];
            for &b in &level.orbit {
                let u = &level.transversal[&b];
                for s in &level.gens {
                    let target = s.apply(b);
                    let schreier = u.then(s).then(&self.levels[i].transversal[&target].inverse());
                    let residue = self.sift_from(i + 1, schreier);
                    if !residue.is_identity() {
                        return Some(residue);
                    }
                }
            }
        }
        None
    }

    fn sift_from(&self, start: usize, mut g: Perm) -> Perm {
        for level in &self.levels[start..] {
            let b = g.apply(level.point);
            match level.transversal.get(&b) {
                Some(u) => g = g.then(&u.inverse()),
                None => return g,
            }
        }
        g
    }

    /// Saturates at `u128::MAX`: orders past that bound only occur for
    /// near-complete graphs whose exact order is never needed downstream.
    fn order(&self) -> u128 {
        self.levels
            .iter()
            .fold(1u128, |acc, l| acc.saturating_mul(l.orbit.len() as u128))
    }
}

/// A permutation group given by generators, carrying a stabilizer-chain
/// certificate of its order. Immutable after construction.
#[derive(Clone)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Perm>,
    chain: StabChain,
}

impl PermGroup {
    pub fn trivial(degree: usize) -> Self {
        PermGroup {
            degree,
            generators: Vec::new(),
            chain: StabChain::build(degree, &[], &[]),
        }
    }

    /// Runs Schreier–Sims on the given generators.
    pub fn from_generators(degree: usize, generators: Vec<Perm>) -> Result<Self> {
        if degree > MAX_DEGREE {
            return Err(Error::DegreeTooLarge(degree));
        }
        for g in &generators {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch {
                    expected: degree,
                    got: g.degree(),
                });
            }
        }
        let chain = StabChain::build(degree, &generators, &[]);
        Ok(PermGroup {
            degree,
            generators,
            chain,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn order(&self) -> u128 {
        self.chain.order()
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    /// Membership test by sifting through the stabilizer chain.
    pub fn contains(&self, g: &Perm) -> bool {
        g.degree() == self.degree && self.chain.sift_from(0, g.clone()).is_identity()
    }

    pub fn is_subgroup_of(&self, other: &PermGroup) -> bool {
        self.degree == other.degree && self.generators.iter().all(|g| other.contains(g))
    }

    pub fn base(&self) -> Vec<usize> {
        self.chain.levels.iter().map(|l| l.point).collect()
    }

    /// All elements, by chain-transversal products. Guarded: panics above
    /// 2^24 elements, which nothing at desk scale comes near.
    pub fn elements(&self) -> Vec<Perm> {
        let order = self.order();
        assert!(order <= (1 << 24), "element enumeration of order {order}");
        let mut elems = vec![Perm::identity(self.degree)];
        for level in self.chain.levels.iter().rev() {
            let mut next = Vec::with_capacity(elems.len() * level.orbit.len());
            for &b in &level.orbit {
                let u = &level.transversal[&b];
                for h in &elems {
                    next.push(h.then(u));
                }
            }
            elems = next;
        }
        elems
    }

    /// Uniformly random element, one transversal element per level.
    pub fn random_element<R: rand::Rng>(&self, rng: &mut R) -> Perm {
        let mut g = Perm::identity(self.degree);
        for level in &self.chain.levels {
            let b = level.orbit[rng.gen_range(0..level.orbit.len())];
            g = level.transversal[&b].then(&g);
        }
        g
    }

    /// Pointwise stabilizer of `points`, via a chain whose base is forced to
    /// start with those points.
    pub fn stabilizer_of_points(&self, points: &[usize]) -> PermGroup {
        let chain = StabChain::build(self.degree, &self.generators, points);
        let gens: Vec<Perm> = chain
            .strong
            .iter()
            .filter(|g| points.iter().all(|&p| g.apply(p) == p))
            .cloned()
            .collect();
        PermGroup::from_generators(self.degree, gens).expect("stabilizer generators are valid")
    }

    /// Orbit of a point under the group, in BFS discovery order.
    pub fn orbit(&self, point: usize) -> Vec<usize> {
        let mut seen = vec![false; self.degree];
        let mut orbit = vec![point];
        seen[point] = true;
        let mut head = 0;
        while head < orbit.len() {
            let b = orbit[head];
            head += 1;
            for g in &self.generators {
                let b2 = g.apply(b);
                if !seen[b2] {
                    seen[b2] = true;
                    orbit.push(b2);
                }
            }
        }
        orbit
    }

    /// All orbits, cells listed by minimal member, members in BFS order.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree];
        let mut out = Vec::new();
        for start in 0..self.degree {
            if seen[start] {
                continue;
            }
            let orbit = self.orbit(start);
            for &x in &orbit {
                seen[x] = true;
            }
            out.push(orbit);
        }
        out
    }

    /// Lexicographically minimal element of the right coset `H·g` (images
    /// compared pointwise over `0..degree`). Relies on the chain's ascending
    /// minimal-moved-point base.
    pub fn min_coset_rep(&self, g: &Perm) -> Perm {
        let mut cur = g.clone();
        for level in &self.chain.levels {
            let best = level
                .orbit
                .iter()
                .min_by_key(|&&b| cur.apply(b))
                .copied()
                .expect("orbit nonempty");
            cur = level.transversal[&best].then(&cur);
        }
        cur
    }
}

impl fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "PermGroup(degree={}, order={}, gens={})",
            self.degree,
            self.order(),
            self.generators.len()
        )
    }
}

/// Wire format for groups: one permutation per inner array, images 0-based.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupJson {
    pub degree: usize,
    pub generators: Vec<Vec<usize>>,
    #[serde(default)]
    pub name: String,
    /// When set, a loader must verify membership against a parent group.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub parent_check: bool,
}

impl GroupJson {
    pub fn from_group(g: &PermGroup, name: &str) -> Self {
        GroupJson {
            degree: g.degree(),
            generators: g.generators().iter().map(|p| p.images().to_vec()).collect(),
            name: name.to_string(),
            parent_check: false,
        }
    }

    pub fn to_group(&self) -> Result<PermGroup> {
        let mut gens = Vec::with_capacity(self.generators.len());
        for imgs in &self.generators {
            if imgs.len() != self.degree {
                return Err(Error::Format(format!(
                    "generator of length {} in a degree-{} group file",
                    imgs.len(),
                    self.degree
                )));
            }
            gens.push(Perm::from_images(imgs.clone())?);
        }
        PermGroup::from_generators(self.degree, gens)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_generators_give_trivial_group() {
        let g = PermGroup::from_generators(5, vec![Perm::identity(5)]).unwrap();
        assert_eq!(g.order(), 1);
    }

    #[test]
    fn s5_order_by_brute_force() {
        let g = PermGroup::from_generators(
            5,
            vec![
                Perm::from_cycles(5, &[&[0, 1, 2, 3, 4]]).unwrap(),
                Perm::from_cycles(5, &[&[0, 1]]).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(g.order(), 120);
        let elems = g.elements();
        assert_eq!(elems.len(), 120);
        let mut uniq = elems.clone();
        uniq.sort();
        uniq.dedup();
        assert_eq!(uniq.len(), 120);
        for e in &elems {
            assert!(g.contains(e));
        }
    }

    #[test]
    fn membership_rejects_outsiders() {
        // A4 on 4 points does not contain a transposition.
        let a4 = PermGroup::from_generators(
            4,
            vec![
                Perm::from_cycles(4, &[&[0, 1, 2]]).unwrap(),
                Perm::from_cycles(4, &[&[0, 1], &[2, 3]]).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(a4.order(), 12);
        assert!(!a4.contains(&Perm::from_cycles(4, &[&[0, 1]]).unwrap()));
    }

    #[test]
    fn stabilizer_of_points_in_s4() {
        let s4 = PermGroup::from_generators(
            4,
            vec![
                Perm::from_cycles(4, &[&[0, 1, 2, 3]]).unwrap(),
                Perm::from_cycles(4, &[&[0, 1]]).unwrap(),
            ],
        )
        .unwrap();
        let stab = s4.stabilizer_of_points(&[0]);
        assert_eq!(stab.order(), 6);
        let stab2 = s4.stabilizer_of_points(&[0, 1]);
        assert_eq!(stab2.order(), 2);
    }

    #[test]
    fn min_coset_rep_is_constant_on_cosets() {
        let h = PermGroup::from_generators(4, vec![Perm::from_cycles(4, &[&[0, 1]]).unwrap()])
            .unwrap();
        let s4 = PermGroup::from_generators(
            4,
            vec![
                Perm::from_cycles(4, &[&[0, 1, 2, 3]]).unwrap(),
                Perm::from_cycles(4, &[&[0, 1]]).unwrap(),
            ],
        )
        .unwrap();
        let mut reps = std::collections::HashSet::new();
        for g in s4.elements() {
            let rep = h.min_coset_rep(&g);
            // rep must lie in the coset Hg and be minimal over it.
            for l in h.elements() {
                let member = l.then(&g);
                assert_eq!(h.min_coset_rep(&member), rep);
                assert!(rep.images() <= member.images() || rep == member);
            }
            reps.insert(rep.into_images());
        }
        assert_eq!(reps.len(), 12); // [S4 : <(0 1)>] = 12
    }
}
