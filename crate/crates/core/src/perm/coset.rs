use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::perm::{Perm, PermGroup};

/// The right coset space `[G:H]` with canonical representatives.
///
/// Representatives are the lexicographically minimal elements of their
/// cosets (minimal image sequence), listed in ascending order, so vertex
/// labels derived from them are deterministic across runs.
#[derive(Clone)]
pub struct CosetSpace {
    group: Arc<PermGroup>,
    subgroup: Arc<PermGroup>,
    reps: Vec<Perm>,
    index_of: HashMap<Vec<usize>, usize>,
}

impl CosetSpace {
    pub fn group(&self) -> &Arc<PermGroup> {
        &self.group
    }

    pub fn subgroup(&self) -> &Arc<PermGroup> {
        &self.subgroup
    }

    pub fn index(&self) -> usize {
        self.reps.len()
    }

    pub fn reps(&self) -> &[Perm] {
        &self.reps
    }

    pub fn rep(&self, i: usize) -> &Perm {
        &self.reps[i]
    }

    /// Canonical representative of the coset `H·g`.
    pub fn canon(&self, g: &Perm) -> Perm {
        self.subgroup.min_coset_rep(g)
    }

    pub fn index_of(&self, g: &Perm) -> usize {
        self.index_of[self.canon(g).images()]
    }

    /// Image of coset `i` under right multiplication by `g`.
    pub fn act(&self, i: usize, g: &Perm) -> usize {
        self.index_of(&self.reps[i].then(g))
    }

    /// The permutation induced by `g` on coset indices.
    pub fn action_perm(&self, g: &Perm) -> Perm {
        let images = (0..self.index()).map(|i| self.act(i, g)).collect();
        Perm::from_images(images).expect("right multiplication permutes cosets")
    }
}

/// Enumerates `[G:H]`, checking `H ≤ G` generator by generator.
pub fn coset_space(group: &Arc<PermGroup>, subgroup: &Arc<PermGroup>) -> Result<CosetSpace> {
    if !subgroup.is_subgroup_of(group) {
        return Err(Error::NotASubgroup {
            sub: format!("{subgroup:?}"),
            sup: format!("{group:?}"),
        });
    }
    let mut reps = Vec::new();
    let mut seen: HashMap<Vec<usize>, usize> = HashMap::new();
    let start = subgroup.min_coset_rep(&Perm::identity(group.degree()));
    seen.insert(start.images().to_vec(), 0);
    reps.push(start);
    let mut head = 0;
    while head < reps.len() {
        let r = reps[head].clone();
        head += 1;
        for g in group.generators() {
            let next = subgroup.min_coset_rep(&r.then(g));
            if !seen.contains_key(next.images()) {
                seen.insert(next.images().to_vec(), reps.len());
                reps.push(next);
            }
        }
    }
    debug_assert_eq!(reps.len() as u128 * subgroup.order(), group.order());
    reps.sort();
    let index_of = reps
        .iter()
        .enumerate()
        .map(|(i, r)| (r.images().to_vec(), i))
        .collect();
    Ok(CosetSpace {
        group: Arc::clone(group),
        subgroup: Arc::clone(subgroup),
        reps,
        index_of,
    })
}

/// A double coset `R·rep·L`, with `size = |R|·|L| / |L ∩ rep⁻¹·R·rep|`.
#[derive(Clone, Debug)]
pub struct DoubleCoset {
    pub rep: Perm,
    pub size: u128,
}

/// Partition of `G` into double cosets `R·d·L`, enumerated as `L`-orbits on
/// the coset space `[G:R]`. Ordered by ascending representative, with the
/// representative the minimal coset rep occurring in the orbit.
pub fn double_cosets(
    group: &Arc<PermGroup>,
    right: &Arc<PermGroup>,
    left: &Arc<PermGroup>,
) -> Result<Vec<DoubleCoset>> {
    if !left.is_subgroup_of(group) {
        return Err(Error::NotASubgroup {
            sub: format!("{left:?}"),
            sup: format!("{group:?}"),
        });
    }
    let cs = coset_space(group, right)?;
    let n = cs.index();
    let mut assigned = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if assigned[start] {
            continue;
        }
        let mut orbit = vec![start];
        assigned[start] = true;
        let mut head = 0;
        while head < orbit.len() {
            let i = orbit[head];
            head += 1;
            for g in left.generators() {
                let j = cs.act(i, g);
                if !assigned[j] {
                    assigned[j] = true;
                    orbit.push(j);
                }
            }
        }
        let rep = orbit
            .iter()
            .map(|&i| cs.rep(i))
            .min()
            .expect("orbit nonempty")
            .clone();
        out.push(DoubleCoset {
            rep,
            size: orbit.len() as u128 * right.order(),
        });
    }
    out.sort_by(|a, b| a.rep.cmp(&b.rep));
    debug_assert_eq!(out.iter().map(|d| d.size).sum::<u128>(), group.order());
    Ok(out)
}

/// The permutation action of `G` on `[G:H]`, with its kernel `Core_G(H)`.
pub struct CosetAction {
    pub space: CosetSpace,
    /// Image of each generator of `G`, in generator order.
    pub generator_images: Vec<Perm>,
    pub kernel: PermGroup,
}

/// Computes the coset action homomorphism and its kernel.
///
/// The kernel falls out of a stabilizer chain over the combined domain of
///// coset points followed by natural points: the pointwise stabilizer of the
/// coset block, restricted to the natural block, is exactly `Core_G(H)`.
pub fn coset_action(group: &Arc<PermGroup>, subgroup: &Arc<PermGroup>) -> Result<CosetAction> {
    let space = coset_space(group, subgroup)?;
    let m = space.index();
    let n = group.degree();
    let generator_images: Vec<Perm> = group
        .generators()
        .iter()
        .map(|g| space.action_perm(g))
        .collect();

    let combined: Vec<Perm> = group
        .generators()
        .iter()
        .zip(&generator_images)
        .map(|(g, img)| {
            let mut images: Vec<usize> = img.images().to_vec();
            images.extend(g.images().iter().map(|&y| y + m));
            Perm::from_images(images).expect("combined action is a permutation")
        })
        .collect();
    let combined_group = PermGroup::from_generators(n + m, combined)?;
    let coset_points: Vec<usize> = (0..m).collect();
    let stab = combined_group.stabilizer_of_points(&coset_points);
    let kernel_gens: Vec<Perm> = stab
        .generators()
        .iter()
        .map(|g| {
            Perm::from_images(g.images()[m..].iter().map(|&y| y - m).collect())
                .expect("restriction to the natural block is a permutation")
        })
        .collect();
    let kernel = PermGroup::from_generators(n, kernel_gens)?;
    debug_assert!(kernel.is_subgroup_of(subgroup));
    Ok(CosetAction {
        space,
        generator_images,
        kernel,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s3() -> Arc<PermGroup> {
        Arc::new(
            PermGroup::from_generators(
                3,
                vec![
                    Perm::from_cycles(3, &[&[0, 1, 2]]).unwrap(),
                    Perm::from_cycles(3, &[&[0, 1]]).unwrap(),
                ],
            )
            .unwrap(),
        )
    }

    fn s4() -> Arc<PermGroup> {
        Arc::new(
            PermGroup::from_generators(
                4,
                vec![
                    Perm::from_cycles(4, &[&[0, 1, 2, 3]]).unwrap(),
                    Perm::from_cycles(4, &[&[0, 1]]).unwrap(),
                ],
            )
            .unwrap(),
        )
    }

    #[test]
    fn whole_group_is_a_single_coset() {
        let g = s3();
        let cs = coset_space(&g, &g).unwrap();
        assert_eq!(cs.index(), 1);
    }

    #[test]
    fn s3_mod_transposition_has_index_three() {
        let g = s3();
        let h = Arc::new(
            PermGroup::from_generators(3, vec![Perm::from_cycles(3, &[&[0, 1]]).unwrap()]).unwrap(),
        );
        let cs = coset_space(&g, &h).unwrap();
        assert_eq!(cs.index(), 3);
        // Brute force: canonicalization is constant on cosets and the right
        // action of each generator permutes the reps.
        for e in g.elements() {
            for l in h.elements() {
                assert_eq!(cs.canon(&l.then(&e)), cs.canon(&e));
            }
        }
        for gen in g.generators() {
            let p = cs.action_perm(gen);
            assert_eq!(p.degree(), 3);
        }
    }

    #[test]
    fn containment_is_checked() {
        // A transposition subgroup is rejected against a group that does not
        // contain it, and accepted against one that does.
        let s4 = s4();
        let transposition = Arc::new(
            PermGroup::from_generators(4, vec![Perm::from_cycles(4, &[&[0, 1]]).unwrap()]).unwrap(),
        );
        assert!(coset_space(&s4, &transposition).is_ok());
        let v4 = Arc::new(
            PermGroup::from_generators(
                4,
                vec![
                    Perm::from_cycles(4, &[&[0, 1], &[2, 3]]).unwrap(),
                    Perm::from_cycles(4, &[&[0, 2], &[1, 3]]).unwrap(),
                ],
            )
            .unwrap(),
        );
        assert!(!transposition.is_subgroup_of(&v4));
        assert!(coset_space(&v4, &transposition).is_err());
    }

    #[test]
    fn double_cosets_of_s3_brute_force() {
        // (S3, R=<(0 2)>, L=<(0 1)>) -> sizes {2, 4}.
        let g = s3();
        let r = Arc::new(
            PermGroup::from_generators(3, vec![Perm::from_cycles(3, &[&[0, 2]]).unwrap()]).unwrap(),
        );
        let l = Arc::new(
            PermGroup::from_generators(3, vec![Perm::from_cycles(3, &[&[0, 1]]).unwrap()]).unwrap(),
        );
        let dcs = double_cosets(&g, &r, &l).unwrap();
        let mut sizes: Vec<u128> = dcs.iter().map(|d| d.size).collect();
        sizes.sort();
        assert_eq!(sizes, vec![2, 4]);
        // Brute-force check: R·d·L really has the claimed size, and the double
        // cosets partition G.
        let mut all = std::collections::HashSet::new();
        for dc in &dcs {
            let mut members = std::collections::HashSet::new();
            for rr in r.elements() {
                for ll in l.elements() {
                    members.insert(rr.then(&dc.rep).then(&ll).into_images());
                }
            }
            assert_eq!(members.len() as u128, dc.size);
            all.extend(members);
        }
        assert_eq!(all.len() as u128, g.order());
    }

    #[test]
    fn trivial_double_coset_is_whole_group() {
        let g = s3();
        let dcs = double_cosets(&g, &g, &g).unwrap();
        assert_eq!(dcs.len(), 1);
        assert_eq!(dcs[0].size, 6);
    }

    #[test]
    fn coset_action_kernel_of_v4_in_s4() {
        let g = s4();
        let v4 = Arc::new(
            PermGroup::from_generators(
                4,
                vec![
                    Perm::from_cycles(4, &[&[0, 1], &[2, 3]]).unwrap(),
                    Perm::from_cycles(4, &[&[0, 2], &[1, 3]]).unwrap(),
                ],
            )
            .unwrap(),
        );
        let act = coset_action(&g, &v4).unwrap();
        assert_eq!(act.space.index(), 6);
        assert_eq!(act.kernel.order(), 4);
        // Brute-force core: elements of S4 acting trivially on [S4:V4].
        let mut core = 0u32;
        for e in g.elements() {
            if (0..act.space.index()).all(|i| act.space.act(i, &e) == i) {
                core += 1;
                assert!(act.kernel.contains(&e));
            }
        }
        assert_eq!(core, 4);
        // Kernel is normal in G and contained in H.
        assert!(act.kernel.is_subgroup_of(&v4));
        for e in g.elements() {
            for k in act.kernel.generators() {
                assert!(act.kernel.contains(&k.conjugate(&e)));
            }
        }
    }
}
