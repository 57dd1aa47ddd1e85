use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::perm::{Perm, PermGroup};

/// Seeded stream of uniformly random group elements, one transversal element
/// per chain level. Deterministic across runs for a fixed seed.
pub struct RandomElements {
    rng: ChaCha8Rng,
}

impl RandomElements {
    pub fn new(seed: u64) -> Self {
        RandomElements {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn next(&mut self, group: &PermGroup) -> Perm {
        group.random_element(&mut self.rng)
    }
}

/// Finds an element of order exactly `n` by raising random elements to
/// suitable powers.
pub fn element_of_order(
    group: &PermGroup,
    n: u64,
    budget: u64,
    rand: &mut RandomElements,
) -> Result<Perm> {
    if n == 0 {
        return Err(Error::Precondition("order must be at least 1".into()));
    }
    if n == 1 {
        return Ok(Perm::identity(group.degree()));
    }
    for _ in 0..budget {
        let g = rand.next(group);
        let m = g.order();
        if m % n == 0 {
            let candidate = g.pow((m / n) as i64);
            if candidate.order() == n {
                return Ok(candidate);
            }
        }
    }
    Err(Error::BudgetExhausted {
        target: format!("element of order {n}"),
        budget,
    })
}

/// Finds `b` of order `q` normalizing `⟨t⟩` with `⟨t, b⟩` of order `p·q`,
/// where `t` has prime order `p`. Random draws collect normalizing elements;
/// the order-`q` element is then searched inside the accumulated normalizer.
pub fn normalizer_search(
    group: &PermGroup,
    t: &Perm,
    q: u64,
    budget: u64,
    rand: &mut RandomElements,
) -> Result<Perm> {
    let p = t.order();
    let powers: Vec<Perm> = (0..p).map(|k| t.pow(k as i64)).collect();
    let in_cyclic = |g: &Perm| powers.contains(g);

    let try_complete = |normalizer: &PermGroup, rand: &mut RandomElements| -> Option<Perm> {
        let attempts = 200;
        for _ in 0..attempts {
            let b = match element_of_order(normalizer, q, 50, rand) {
                Ok(b) => b,
                Err(_) => return None,
            };
            let conj = t.conjugate(&b);
            if !in_cyclic(&conj) || conj.is_identity() {
                continue;
            }
            if let Ok(sub) =
                PermGroup::from_generators(group.degree(), vec![t.clone(), b.clone()])
            {
                if sub.order() == (p as u128) * (q as u128) {
                    return Some(b);
                }
            }
        }
        None
    };

    let mut norm_gens = vec![t.clone()];
    let mut normalizer = PermGroup::from_generators(group.degree(), norm_gens.clone())?;
    let mut since_growth = 0u64;
    for draw in 0..budget {
        let g = rand.next(group);
        if in_cyclic(&t.conjugate(&g)) && !normalizer.contains(&g) {
            norm_gens.push(g);
            normalizer = PermGroup::from_generators(group.degree(), norm_gens.clone())?;
            since_growth = 0;
            if let Some(b) = try_complete(&normalizer, rand) {
                return Ok(b);
            }
        } else {
            since_growth += 1;
        }
        // Re-probe occasionally even without growth: the order-q search
        // itself is randomized.
        if since_growth > 0 && draw % 1000 == 999 {
            if let Some(b) = try_complete(&normalizer, rand) {
                return Ok(b);
            }
        }
    }
    Err(Error::BudgetExhausted {
        target: format!("order-{q} normalizer element of a cyclic group of order {p}"),
        budget,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s5() -> PermGroup {
        PermGroup::from_generators(
            5,
            vec![
                Perm::from_cycles(5, &[&[0, 1, 2, 3, 4]]).unwrap(),
                Perm::from_cycles(5, &[&[0, 1]]).unwrap(),
            ],
        )
        .unwrap()
    }

    #[test]
    fn order_five_in_z5() {
        let z5 =
            PermGroup::from_generators(5, vec![Perm::from_cycles(5, &[&[0, 1, 2, 3, 4]]).unwrap()])
                .unwrap();
        let mut rand = RandomElements::new(1);
        let g = element_of_order(&z5, 5, 100, &mut rand).unwrap();
        assert_eq!(g.order(), 5);
    }

    #[test]
    fn order_six_in_s5_matches_exhaustive_census() {
        // Exhaustive census of S5 element orders: {1, 2, 3, 4, 5, 6}.
        let s5 = s5();
        let mut census: std::collections::BTreeSet<u64> =
            s5.elements().iter().map(|e| e.order()).collect();
        assert_eq!(
            census.iter().copied().collect::<Vec<_>>(),
            vec![1, 2, 3, 4, 5, 6]
        );
        let mut rand = RandomElements::new(7);
        for n in census.clone() {
            let g = element_of_order(&s5, n, 1000, &mut rand).unwrap();
            assert_eq!(g.order(), n);
        }
        // Order 7 does not exist.
        census.insert(7);
        assert!(element_of_order(&s5, 7, 200, &mut rand).is_err());
    }

    #[test]
    fn normalizer_search_in_d10() {
        // D10 = <a, b | a^5 = b^2 = 1, a^b = a^-1> acting on 5 points.
        let a = Perm::from_cycles(5, &[&[0, 1, 2, 3, 4]]).unwrap();
        let b = Perm::from_cycles(5, &[&[1, 4], &[2, 3]]).unwrap();
        let d10 = PermGroup::from_generators(5, vec![a.clone(), b]).unwrap();
        assert_eq!(d10.order(), 10);
        let mut rand = RandomElements::new(3);
        let found = normalizer_search(&d10, &a, 2, 1000, &mut rand).unwrap();
        assert_eq!(found.order(), 2);
        let conj = a.conjugate(&found);
        assert_eq!(conj, a.pow(-1));
    }
}
