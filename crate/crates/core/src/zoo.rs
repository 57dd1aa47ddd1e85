//! Concrete groups, subgroups and graph instances.
//!
//! Everything the rest of the crate treats abstractly is instantiated here:
//! projective groups over small prime fields, symmetric groups, metacyclic
//! Frobenius groups, subgroup location by randomized standard-generator
//! search, the tabulated bi-coset instances, and census-file ingestion.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::bicoset::{is_prime, BiCosetSpec, BuiltBiCoset};
use crate::error::{Error, Result};
use crate::graph::{from_graph6, BipartiteGraph, BipartiteJson, SimpleGraph};
use crate::perm::{
    double_cosets, element_of_order, normalizer_search, GroupJson, Perm, PermGroup,
    RandomElements,
};

/// How to build a permutation group from scratch.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum GroupRecipe {
    /// `PSL(2, p)` on the `p + 1` points of the projective line.
    Psl2 { p: u64 },
    /// `PGL(2, p)` on the same points.
    Pgl2 { p: u64 },
    /// `Sym(n)` in its natural action.
    Sym { n: usize },
    /// `Z_p : Z_{qk}` on `p` points via `x ↦ x+1` and `x ↦ rx`.
    Metacyclic { p: u64, q: u64, k: u64, r: u64 },
    /// Group JSON file (degree + generator images).
    FromFile { path: PathBuf },
}

/// Projective-line point order: ∞ at index 0, then 0..p−1 at index 1+x.
fn proj_perm(p: u64, map: impl Fn(Option<u64>) -> Option<u64>) -> Perm {
    let to_idx = |v: Option<u64>| match v {
        None => 0usize,
        Some(x) => 1 + x as usize,
    };
    let images = (0..=p)
        .map(|i| {
            let v = if i == 0 { None } else { Some(i - 1) };
            to_idx(map(v))
        })
        .collect();
    Perm::from_images(images).expect("fractional-linear maps permute the projective line")
}

fn inv_mod(x: u64, p: u64) -> u64 {
    // Fermat.
    pow_mod(x, p - 2, p)
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

fn primitive_root(p: u64) -> u64 {
    // Smallest generator of F_p^*; p is small here.
    let phi = p - 1;
    let mut factors = Vec::new();
    let mut m = phi;
    let mut d = 2;
    while d * d <= m {
        if m % d == 0 {
            factors.push(d);
            while m % d == 0 {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        factors.push(m);
    }
    (2..p)
        .find(|&g| factors.iter().all(|&f| pow_mod(g, phi / f, p) != 1))
        .expect("every prime field has a primitive root")
}

fn mult_order(r: u64, p: u64) -> u64 {
    let mut acc = r % p;
    let mut k = 1;
    while acc != 1 {
        acc = acc * r % p;
        k += 1;
    }
    k
}

/// `x ↦ x + 1` on the projective line (fixes ∞).
fn translation(p: u64) -> Perm {
    proj_perm(p, |v| v.map(|x| (x + 1) % p))
}

/// `x ↦ c·x` on the projective line.
fn scaling(p: u64, c: u64) -> Perm {
    proj_perm(p, |v| v.map(|x| x * c % p))
}

/// `x ↦ −1/x` on the projective line.
fn neg_inversion(p: u64) -> Perm {
    proj_perm(p, |v| match v {
        None => Some(0),
        Some(0) => None,
        Some(x) => Some((p - inv_mod(x, p)) % p),
    })
}

/// An involution of `PGL(2, p)` outside `PSL(2, p)`.
pub fn outer_involution(p: u64) -> Perm {
    if p % 4 == 3 {
        // x ↦ −x has determinant −1, a non-square when p ≡ 3 (mod 4).
        scaling(p, p - 1)
    } else {
        // x ↦ ζ/x with ζ a non-square: determinant −ζ is a non-square
        // because −1 is a square when p ≡ 1 (mod 4).
        let zeta = (2..p)
            .find(|&z| pow_mod(z, (p - 1) / 2, p) != 1)
            .expect("non-squares exist");
        proj_perm(p, move |v| match v {
            None => Some(0),
            Some(0) => None,
            Some(x) => Some(zeta * inv_mod(x, p) % p),
        })
    }
}

/// Builds the group a recipe describes and verifies its order.
pub fn realize(recipe: &GroupRecipe) -> Result<Arc<PermGroup>> {
    match *recipe {
        GroupRecipe::Psl2 { p } => {
            check_odd_prime(p)?;
            let zeta = primitive_root(p);
            let gens = vec![
                translation(p),
                scaling(p, zeta * zeta % p),
                neg_inversion(p),
            ];
            let g = PermGroup::from_generators((p + 1) as usize, gens)?;
            let expected = (p as u128) * (p as u128 * p as u128 - 1) / 2;
            expect_order(&g, expected, "PSL(2, p)")?;
            Ok(Arc::new(g))
        }
        GroupRecipe::Pgl2 { p } => {
            check_odd_prime(p)?;
            let zeta = primitive_root(p);
            let gens = vec![translation(p), scaling(p, zeta), neg_inversion(p)];
            let g = PermGroup::from_generators((p + 1) as usize, gens)?;
            let expected = (p as u128) * (p as u128 * p as u128 - 1);
            expect_order(&g, expected, "PGL(2, p)")?;
            Ok(Arc::new(g))
        }
        GroupRecipe::Sym { n } => {
            if n < 1 {
                return Err(Error::Recipe("sym(n) needs n ≥ 1".into()));
            }
            let mut gens = Vec::new();
            if n >= 2 {
                gens.push(Perm::from_cycles(n, &[&(0..n).collect::<Vec<_>>()])?);
                gens.push(Perm::from_cycles(n, &[&[0, 1]])?);
            }
            let g = PermGroup::from_generators(n, gens)?;
            expect_order(&g, factorial(n), "Sym(n)")?;
            Ok(Arc::new(g))
        }
        GroupRecipe::Metacyclic { p, q, k, r } => {
            check_odd_prime(p)?;
            if k < 2 || (p - 1) % (q * k) != 0 {
                return Err(Error::Recipe(format!(
                    "metacyclic parameters need k ≥ 2 and qk | p−1; got (p, q, k) = ({p}, {q}, {k})"
                )));
            }
            if mult_order(r, p) != q * k {
                return Err(Error::Recipe(format!(
                    "r = {r} has multiplicative order {} mod {p}, expected {}",
                    mult_order(r, p),
                    q * k
                )));
            }
            let shift = Perm::from_images((0..p as usize).map(|x| (x + 1) % p as usize).collect())?;
            let scale = Perm::from_images((0..p as usize).map(|x| (x as u64 * r % p) as usize).collect())?;
            let g = PermGroup::from_generators(p as usize, vec![shift, scale])?;
            expect_order(&g, p as u128 * (q * k) as u128, "Z_p : Z_qk")?;
            Ok(Arc::new(g))
        }
        GroupRecipe::FromFile { ref path } => Ok(Arc::new(load_group_file(path, None)?)),
    }
}

/// Loads a group JSON file; with `parent` given (or the file's
/// `parent_check` flag set) every generator is verified as a member.
pub fn load_group_file(path: &Path, parent: Option<&PermGroup>) -> Result<PermGroup> {
    let text = std::fs::read_to_string(path)?;
    let json: GroupJson = serde_json::from_str(&text)
        .map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
    let g = json.to_group()?;
    if json.parent_check && parent.is_none() {
        return Err(Error::Precondition(format!(
            "{} requests a parent membership check but no parent group was supplied",
            path.display()
        )));
    }
    if let Some(sup) = parent {
        for gen in g.generators() {
            if !sup.contains(gen) {
                return Err(Error::NotAMember {
                    element: format!("{gen}"),
                    group: format!("parent of {}", path.display()),
                });
            }
        }
    }
    Ok(g)
}

fn check_odd_prime(p: u64) -> Result<()> {
    if !is_prime(p) || p == 2 {
        return Err(Error::Recipe(format!("{p} is not an odd prime")));
    }
    Ok(())
}

fn expect_order(g: &PermGroup, expected: u128, what: &str) -> Result<()> {
    if g.order() != expected {
        return Err(Error::Recipe(format!(
            "{what} came out with order {}, expected {expected}",
            g.order()
        )));
    }
    Ok(())
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

/// The subgroup families the tables call for.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum SubgroupKind {
    A4,
    S4,
    A5,
    /// Dihedral group of the given (even) order.
    Dihedral { order: u64 },
    PointStabilizer { point: usize },
    /// Setwise stabilizer inside a full symmetric group; the pair stabilizer
    /// is the two-element case.
    SetStabilizer { set: Vec<usize> },
    /// Normalizer of a Sylow p-subgroup of PSL(2, p), order p(p−1)/2.
    Borel,
    Custom { generators: Vec<Vec<usize>> },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SubgroupDescriptor {
    pub kind: SubgroupKind,
    /// Conjugate the located subgroup by an outer involution, selecting the
    /// σ-twisted conjugacy class.
    #[serde(default)]
    pub twisted: bool,
}

impl SubgroupDescriptor {
    pub fn plain(kind: SubgroupKind) -> Self {
        SubgroupDescriptor { kind, twisted: false }
    }
}

/// Element-order census over all elements; only usable for small subgroups.
fn order_census(g: &PermGroup) -> BTreeSet<u64> {
    g.elements().iter().map(|e| e.order()).collect()
}

fn fingerprint_ok(kind: &SubgroupKind, g: &PermGroup) -> bool {
    match kind {
        SubgroupKind::A4 => g.order() == 12 && order_census(g) == BTreeSet::from([1, 2, 3]),
        SubgroupKind::S4 => g.order() == 24 && order_census(g) == BTreeSet::from([1, 2, 3, 4]),
        SubgroupKind::A5 => g.order() == 60 && order_census(g) == BTreeSet::from([1, 2, 3, 5]),
        SubgroupKind::Dihedral { order } => {
            let n = order / 2;
            let mut expected: BTreeSet<u64> = BTreeSet::from([1, 2]);
            for d in 2..=n {
                if n % d == 0 {
                    expected.insert(d);
                }
            }
            g.order() == *order as u128 && order_census(g) == expected
        }
        _ => true,
    }
}

/// Randomized standard-generator search: x of order 2, y of order 3 with the
/// product order and group order pinned per type.
fn standard_generators(
    group: &PermGroup,
    product_order: u64,
    target: u128,
    budget: u64,
    rand: &mut RandomElements,
) -> Result<PermGroup> {
    for _ in 0..budget {
        let x = match element_of_order(group, 2, 50, rand) {
            Ok(x) => x,
            Err(_) => continue,
        };
        let y = match element_of_order(group, 3, 50, rand) {
            Ok(y) => y,
            Err(_) => continue,
        };
        if x.then(&y).order() != product_order {
            continue;
        }
        let h = PermGroup::from_generators(group.degree(), vec![x, y])?;
        if h.order() == target {
            return Ok(h);
        }
    }
    Err(Error::BudgetExhausted {
        target: format!("subgroup of order {target} by (2, 3, {product_order}) generation"),
        budget,
    })
}

fn dihedral_in(
    group: &PermGroup,
    order: u64,
    budget: u64,
    rand: &mut RandomElements,
) -> Result<PermGroup> {
    if order % 2 != 0 || order < 4 {
        return Err(Error::Recipe(format!("dihedral order {order} must be even and ≥ 4")));
    }
    let n = order / 2;
    let c = element_of_order(group, n, budget, rand)?;
    let c_inv = c.inverse();
    for _ in 0..budget {
        let s = rand.next(group);
        if s.order() == 2 && c.conjugate(&s) == c_inv {
            let h = PermGroup::from_generators(group.degree(), vec![c.clone(), s])?;
            if h.order() == order as u128 {
                return Ok(h);
            }
        }
    }
    Err(Error::BudgetExhausted {
        target: format!("inverting involution for a dihedral group of order {order}"),
        budget,
    })
}

fn set_stabilizer(group: &PermGroup, set: &[usize]) -> Result<PermGroup> {
    let n = group.degree();
    if group.order() != factorial(n) {
        return Err(Error::NotApplicable(
            "setwise stabilizers are constructed only inside full symmetric groups".into(),
        ));
    }
    let inside: Vec<usize> = {
        let mut s = set.to_vec();
        s.sort_unstable();
        s.dedup();
        s
    };
    if inside.iter().any(|&x| x >= n) {
        return Err(Error::Precondition("set element outside the domain".into()));
    }
    let outside: Vec<usize> = (0..n).filter(|x| !inside.contains(x)).collect();
    let mut gens = Vec::new();
    for block in [&inside, &outside] {
        if block.len() >= 2 {
            gens.push(Perm::from_cycles(n, &[&[block[0], block[1]]])?);
        }
        if block.len() >= 3 {
            gens.push(Perm::from_cycles(n, &[block])?);
        }
    }
    let h = PermGroup::from_generators(n, gens)?;
    debug_assert_eq!(
        h.order(),
        factorial(inside.len()) * factorial(outside.len())
    );
    Ok(h)
}

fn borel_in(group: &PermGroup, budget: u64, rand: &mut RandomElements) -> Result<PermGroup> {
    // For PSL(2, p) on p+1 points: p = degree − 1.
    let p = (group.degree() - 1) as u64;
    if !is_prime(p) {
        return Err(Error::NotApplicable(
            "Borel subgroups are located in PSL(2, p) on p+1 points".into(),
        ));
    }
    let t = element_of_order(group, p, budget, rand)?;
    let b = normalizer_search(group, &t, (p - 1) / 2, budget, rand)?;
    let h = PermGroup::from_generators(group.degree(), vec![t, b])?;
    expect_order(&h, p as u128 * ((p - 1) / 2) as u128, "Borel subgroup")?;
    Ok(h)
}

/// Locates a subgroup of the requested kind. `outer` supplies the involution
/// used for σ-twisted classes (required when `desc.twisted`).
pub fn find_subgroup(
    group: &PermGroup,
    desc: &SubgroupDescriptor,
    outer: Option<&Perm>,
    budget: u64,
    rand: &mut RandomElements,
) -> Result<PermGroup> {
    let h = match &desc.kind {
        SubgroupKind::A4 => standard_generators(group, 3, 12, budget, rand)?,
        SubgroupKind::S4 => standard_generators(group, 4, 24, budget, rand)?,
        SubgroupKind::A5 => standard_generators(group, 5, 60, budget, rand)?,
        SubgroupKind::Dihedral { order } => dihedral_in(group, *order, budget, rand)?,
        SubgroupKind::PointStabilizer { point } => group.stabilizer_of_points(&[*point]),
        SubgroupKind::SetStabilizer { set } => set_stabilizer(group, set)?,
        SubgroupKind::Borel => borel_in(group, budget, rand)?,
        SubgroupKind::Custom { generators } => {
            let gens = generators
                .iter()
                .map(|imgs| Perm::from_images(imgs.clone()))
                .collect::<Result<Vec<_>>>()?;
            let h = PermGroup::from_generators(group.degree(), gens)?;
            if !h.is_subgroup_of(group) {
                return Err(Error::NotASubgroup {
                    sub: "custom generators".into(),
                    sup: "the parent group".into(),
                });
            }
            h
        }
    };
    if !fingerprint_ok(&desc.kind, &h) {
        return Err(Error::ConstructionFailed(format!(
            "located subgroup fails the {:?} fingerprint",
            desc.kind
        )));
    }
    if !desc.twisted {
        return Ok(h);
    }
    let sigma = outer.ok_or_else(|| {
        Error::Precondition("σ-twisted class requested but no outer involution supplied".into())
    })?;
    let twisted = PermGroup::from_generators(
        group.degree(),
        h.generators().iter().map(|g| g.conjugate(sigma)).collect(),
    )?;
    if !twisted.is_subgroup_of(group) {
        return Err(Error::ConstructionFailed(
            "outer conjugate left the group; σ is not an automorphism here".into(),
        ));
    }
    Ok(twisted)
}

/// Decides whether two subgroups of `G` are conjugate in `G` by scanning a
/// transversal; exact but only for enumerable `G`.
pub fn conjugate_in(group: &PermGroup, h1: &PermGroup, h2: &PermGroup) -> Option<Perm> {
    if h1.order() != h2.order() {
        return None;
    }
    for g in group.elements() {
        if h1.generators().iter().all(|x| h2.contains(&x.conjugate(&g))) {
            return Some(g);
        }
    }
    None
}

/// A fully realized table row at one valency: the spec, whether the derived
/// graph is the object of interest, and the primes.
pub struct TableInstance {
    pub table: u8,
    pub row: u8,
    pub valency: u64,
    /// Position among same-valency double cosets (the tables list several
    /// non-isomorphic graphs with identical parameters).
    pub index: usize,
    pub spec: BiCosetSpec,
    pub derive: bool,
    pub p: u64,
    pub q: u64,
}

#[derive(Debug, Clone)]
pub struct ZooOptions {
    pub allow_heavy: bool,
    pub seed: u64,
    pub budget: u64,
    pub groups_dir: Option<PathBuf>,
}

impl Default for ZooOptions {
    fn default() -> Self {
        ZooOptions {
            allow_heavy: false,
            seed: 0xC0FFEE,
            budget: 20_000,
            groups_dir: None,
        }
    }
}

struct RowPlan {
    group: GroupRecipe,
    left: SubgroupDescriptor,
    right: SubgroupDescriptor,
    p: u64,
    q: u64,
    heavy: bool,
    derive: bool,
}

fn table1_plan(row: u8) -> Result<RowPlan> {
    use SubgroupKind::*;
    let d = SubgroupDescriptor::plain;
    let twisted = |kind| SubgroupDescriptor { kind, twisted: true };
    let plan = |p, l, r, pp, q, heavy| RowPlan {
        group: p,
        left: l,
        right: r,
        p: pp,
        q,
        heavy,
        derive: false,
    };
    Ok(match row {
        1 => plan(GroupRecipe::Psl2 { p: 59 }, d(A5), d(A5), 59, 29, true),
        2 => plan(GroupRecipe::Psl2 { p: 61 }, d(A5), d(A5), 61, 31, true),
        3 => plan(GroupRecipe::Psl2 { p: 23 }, d(S4), d(S4), 23, 11, false),
        4 => plan(GroupRecipe::Psl2 { p: 59 }, d(A5), twisted(A5), 59, 29, true),
        5 => plan(GroupRecipe::Psl2 { p: 61 }, d(A5), twisted(A5), 61, 31, true),
        6 => plan(GroupRecipe::Psl2 { p: 23 }, d(S4), twisted(S4), 23, 11, false),
        7 => plan(GroupRecipe::Pgl2 { p: 11 }, d(S4), d(Dihedral { order: 24 }), 11, 5, false),
        8 => plan(GroupRecipe::Psl2 { p: 13 }, d(A4), d(Dihedral { order: 12 }), 13, 7, false),
        9 => plan(GroupRecipe::Pgl2 { p: 13 }, d(S4), d(Dihedral { order: 24 }), 13, 7, false),
        10 => plan(GroupRecipe::Psl2 { p: 59 }, d(A5), d(Dihedral { order: 60 }), 59, 29, true),
        11 => plan(GroupRecipe::Psl2 { p: 61 }, d(A5), d(Dihedral { order: 60 }), 61, 31, true),
        12 => plan(GroupRecipe::Psl2 { p: 23 }, d(S4), d(Dihedral { order: 24 }), 23, 11, false),
        13 => {
            return Err(Error::Gated(
                "the sporadic-group row needs externally supplied generator files".into(),
            ))
        }
        _ => return Err(Error::Recipe(format!("table 1 has no row {row}"))),
    })
}

fn table2_plan(row: u8, p_param: Option<u64>) -> Result<RowPlan> {
    use SubgroupKind::*;
    let d = SubgroupDescriptor::plain;
    Ok(match row {
        1 => RowPlan {
            group: GroupRecipe::Sym { n: 7 },
            left: d(PointStabilizer { point: 6 }),
            right: d(SetStabilizer { set: vec![0, 1, 2] }),
            p: 7,
            q: 5,
            heavy: false,
            derive: true,
        },
        2 => {
            let p = p_param.ok_or_else(|| {
                Error::Recipe("table 2 row 2 needs the prime p (≥ 5)".into())
            })?;
            let q = (p - 1) / 2;
            if !is_prime(p) || p < 5 || !is_prime(q) {
                return Err(Error::Recipe(format!(
                    "row 2 needs primes p ≥ 5 and q = (p−1)/2; got p = {p}"
                )));
            }
            RowPlan {
                group: GroupRecipe::Sym { n: p as usize },
                left: d(PointStabilizer { point: p as usize - 1 }),
                right: d(SetStabilizer { set: vec![0, 1] }),
                p,
                q,
                heavy: p > 13,
                derive: true,
            }
        }
        3 => {
            return Err(Error::Gated(
                "the PSL(5, 2) row needs externally supplied generator files".into(),
            ))
        }
        4 => RowPlan {
            group: GroupRecipe::Psl2 { p: 11 },
            left: d(A5),
            right: d(Dihedral { order: 12 }),
            p: 11,
            q: 5,
            heavy: false,
            derive: true,
        },
        5 => RowPlan {
            group: GroupRecipe::Psl2 { p: 11 },
            left: d(A5),
            right: d(A4),
            p: 11,
            q: 5,
            heavy: false,
            derive: true,
        },
        6 => {
            // Smallest admissible parameters unless overridden: (p, q, k) =
            // (13, 2, 2) with r of multiplicative order qk = 4.
            let p = p_param.unwrap_or(13);
            let (q, k) = (2, 2);
            let r = (2..p)
                .find(|&r| mult_order(r, p) == q * k)
                .ok_or_else(|| Error::Recipe(format!("no element of order {} mod {p}", q * k)))?;
            RowPlan {
                group: GroupRecipe::Metacyclic { p, q, k, r },
                left: d(PointStabilizer { point: 0 }),
                right: d(Custom {
                    generators: vec![
                        (0..p as usize)
                            .map(|x| (x as u64 * pow_mod(r, q, p) % p) as usize)
                            .collect(),
                    ],
                }),
                p,
                q,
                heavy: false,
                derive: true,
            }
        }
        _ => return Err(Error::Recipe(format!("table 2 has no row {row}"))),
    })
}

type RowContext = (
    RowPlan,
    Arc<PermGroup>,
    Arc<PermGroup>,
    Arc<PermGroup>,
    Vec<crate::perm::DoubleCoset>,
);

/// Realizes a row's group and subgroups and enumerates the double cosets
/// shared by every instantiation of that row.
fn row_context(table: u8, row: u8, p_param: Option<u64>, opts: &ZooOptions) -> Result<RowContext> {
    let plan = match table {
        1 => table1_plan(row)?,
        2 => table2_plan(row, p_param)?,
        _ => return Err(Error::Recipe(format!("no table {table}"))),
    };
    if plan.heavy && !opts.allow_heavy {
        return Err(Error::Gated(format!(
            "table {table} row {row} is a large instance"
        )));
    }
    let group = realize(&plan.group)?;
    let mut rand = RandomElements::new(
        opts.seed ^ ((table as u64) << 32) ^ ((row as u64) << 16),
    );
    let outer = match plan.group {
        GroupRecipe::Psl2 { p } => Some(outer_involution(p)),
        _ => None,
    };
    let left = Arc::new(find_subgroup(
        &group,
        &plan.left,
        outer.as_ref(),
        opts.budget,
        &mut rand,
    )?);
    let right = Arc::new(find_subgroup(
        &group,
        &plan.right,
        outer.as_ref(),
        opts.budget,
        &mut rand,
    )?);
    let cosets = double_cosets(&group, &right, &left)?;
    Ok((plan, group, left, right, cosets))
}

/// The valencies of connected edge-transitive graphs a table row realizes,
/// ascending, without duplicates.
pub fn row_valencies(
    table: u8,
    row: u8,
    p_param: Option<u64>,
    opts: &ZooOptions,
) -> Result<Vec<u64>> {
    let (_, group, left, right, cosets) = row_context(table, row, p_param, opts)?;
    let mut vals = Vec::new();
    for dc in &cosets {
        let val = (dc.size / right.order()) as u64;
        let spec = BiCosetSpec::new(
            group.clone(),
            left.clone(),
            right.clone(),
            vec![dc.rep.clone()],
        )?;
        if spec.is_connected() {
            vals.push(val);
        }
    }
    vals.sort_unstable();
    vals.dedup();
    Ok(vals)
}

/// Instantiates a table row at the requested valency. Returns one instance
/// per double coset realizing that valency (the tables count several
/// non-isomorphic graphs with the same parameters).
pub fn table_instance(
    table: u8,
    row: u8,
    valency: u64,
    p_param: Option<u64>,
    opts: &ZooOptions,
) -> Result<Vec<TableInstance>> {
    let (plan, group, left, right, cosets) = row_context(table, row, p_param, opts)?;
    let achievable: Vec<u64> = cosets
        .iter()
        .map(|dc| (dc.size / right.order()) as u64)
        .collect();
    let mut out = Vec::new();
    for (dc, &val) in cosets.iter().zip(&achievable) {
        if val != valency {
            continue;
        }
        let spec = BiCosetSpec::new(
            group.clone(),
            left.clone(),
            right.clone(),
            vec![dc.rep.clone()],
        )?;
        // Several double cosets can share a valency; only connected specs
        // are graphs of interest (the tables count those).
        if !spec.is_connected() {
            continue;
        }
        out.push(TableInstance {
            table,
            row,
            valency,
            index: out.len(),
            spec,
            derive: plan.derive,
            p: plan.p,
            q: plan.q,
        });
    }
    if out.is_empty() {
        let mut vals: Vec<u64> = achievable;
        vals.sort_unstable();
        vals.dedup();
        return Err(Error::Recipe(format!(
            "valency {valency} not realized; achievable valencies: {vals:?}"
        )));
    }
    Ok(out)
}

/// Locates a metacyclic subgroup of order `p·q` acting regularly on both
/// parts of a built bi-coset graph, returning the group with its two
/// structured generators `(t, b)` of orders `p` and `q`.
pub fn regular_metacyclic_in(
    built: &BuiltBiCoset,
    part_size: u64,
    budget: u64,
    rand: &mut RandomElements,
) -> Result<(PermGroup, Perm, Perm)> {
    let (p, q) = split_pq(part_size)?;
    if built.graph.u_size() as u64 != part_size || built.graph.w_size() as u64 != part_size {
        return Err(Error::Precondition(format!(
            "parts of size {}/{} do not match {part_size}",
            built.graph.u_size(),
            built.graph.w_size()
        )));
    }
    let group = &built.spec.group;
    let t = element_of_order(group, p, budget, rand)?;
    let b = normalizer_search(group, &t, q, budget, rand)?;
    let r = PermGroup::from_generators(group.degree(), vec![t.clone(), b.clone()])?;
    expect_order(&r, p as u128 * q as u128, "metacyclic candidate")?;
    // Regularity = transitivity on each part (the orders match), checked on
    // the vertex action.
    let vt = built.vertex_perm(&t);
    let vb = built.vertex_perm(&b);
    let vr = PermGroup::from_generators(vt.degree(), vec![vt, vb])?;
    let us = built.graph.u_size();
    for (part, start, size) in [("U", 0usize, us), ("W", us, built.graph.w_size())] {
        let orbit = vr.orbit(start);
        if orbit.len() != size {
            return Err(Error::Intransitive {
                part,
                orbit: orbit.len(),
                size,
            });
        }
    }
    Ok((r, t, b))
}

fn split_pq(part_size: u64) -> Result<(u64, u64)> {
    let mut d = 2;
    while d * d <= part_size {
        if part_size % d == 0 {
            let (q, p) = (d, part_size / d);
            if is_prime(p) && is_prime(q) && p > q {
                return Ok((p, q));
            }
            break;
        }
        d += 1;
    }
    Err(Error::Precondition(format!(
        "{part_size} is not a product of two distinct primes"
    )))
}

/// An ingested census graph.
pub struct CensusGraph {
    pub graph: SimpleGraph,
    /// Present when 2-coloring succeeds (it must for semisymmetric input).
    pub bipartite: Option<BipartiteGraph>,
    pub order: usize,
    /// Common degree, if the graph is regular.
    pub valency: Option<usize>,
}

/// Loads a census file (graph6 or bipartite JSON). Non-bipartite input is
/// accepted in general-graph mode with `bipartite: None` so control graphs
/// like Petersen can pass through.
pub fn load_census_graph(path: &Path) -> Result<CensusGraph> {
    let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("");
    let graph = match ext {
        "g6" => {
            let text = std::fs::read_to_string(path)?;
            let line = text
                .lines()
                .find(|l| !l.trim().is_empty())
                .ok_or_else(|| Error::Format(format!("{}: empty file", path.display())))?;
            from_graph6(line.trim())?
        }
        "json" => {
            let text = std::fs::read_to_string(path)?;
            let json: BipartiteJson = serde_json::from_str(&text)
                .map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
            json.to_graph()?.to_simple()
        }
        other => {
            return Err(Error::Format(format!(
                "{}: unsupported extension {other:?}",
                path.display()
            )))
        }
    };
    let bipartite = graph.bipartition().and_then(|(a, b)| {
        // Renumber into the crate's U-then-W convention.
        let mut mapping = vec![0usize; graph.n()];
        for (i, &v) in a.iter().enumerate() {
            mapping[v] = i;
        }
        for (j, &v) in b.iter().enumerate() {
            mapping[v] = a.len() + j;
        }
        let relabeled = graph.relabeled(&mapping);
        let adjacency: Vec<Vec<usize>> = (0..a.len())
            .map(|u| {
                relabeled
                    .neighbors(u)
                    .iter()
                    .map(|&w| w - a.len())
                    .collect()
            })
            .collect();
        BipartiteGraph::unlabeled(a.len(), b.len(), adjacency).ok()
    });
    Ok(CensusGraph {
        order: graph.n(),
        valency: graph.is_regular(),
        graph,
        bipartite,
    })
}

/// One census manifest row.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CensusEntry {
    pub file: String,
    pub order: usize,
    pub valency: usize,
    pub source: String,
}

pub fn load_manifest(dir: &Path) -> Result<Vec<CensusEntry>> {
    let text = std::fs::read_to_string(dir.join("manifest.json"))?;
    let entries: Vec<CensusEntry> = serde_json::from_str(&text)?;
    Ok(entries)
}

/// The 54-vertex incidence graph of the 27 points and 27 axis-parallel lines
/// of the 3×3×3 grid — the smallest cubic semisymmetric graph.
pub fn gray_graph() -> BipartiteGraph {
    let point = |x: usize, y: usize, z: usize| 9 * x + 3 * y + z;
    // Lines: direction 0 varies x (indexed by y, z), etc.
    let mut lines: Vec<[usize; 3]> = Vec::with_capacity(27);
    for a in 0..3 {
        for b in 0..3 {
            lines.push([point(0, a, b), point(1, a, b), point(2, a, b)]);
        }
    }
    for a in 0..3 {
        for b in 0..3 {
            lines.push([point(a, 0, b), point(a, 1, b), point(a, 2, b)]);
        }
    }
    for a in 0..3 {
        for b in 0..3 {
            lines.push([point(a, b, 0), point(a, b, 1), point(a, b, 2)]);
        }
    }
    let mut adjacency = vec![Vec::new(); 27];
    for (li, line) in lines.iter().enumerate() {
        for &pt in line {
            adjacency[pt].push(li);
        }
    }
    for row in &mut adjacency {
        row.sort_unstable();
    }
    BipartiteGraph::unlabeled(27, 27, adjacency).expect("grid incidence is well-formed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::to_graph6;

    #[test]
    fn projective_group_orders() {
        let psl11 = realize(&GroupRecipe::Psl2 { p: 11 }).unwrap();
        assert_eq!(psl11.order(), 660);
        assert_eq!(psl11.degree(), 12);
        let pgl11 = realize(&GroupRecipe::Pgl2 { p: 11 }).unwrap();
        assert_eq!(pgl11.order(), 1320);
        assert!(psl11.is_subgroup_of(&pgl11));
        let s5 = realize(&GroupRecipe::Sym { n: 5 }).unwrap();
        assert_eq!(s5.order(), 120);
    }

    #[test]
    fn metacyclic_recipe() {
        // r = 5 has order 4 mod 13.
        let g = realize(&GroupRecipe::Metacyclic { p: 13, q: 2, k: 2, r: 5 }).unwrap();
        assert_eq!(g.order(), 52);
        // Bad r (order 2, not 4).
        assert!(realize(&GroupRecipe::Metacyclic { p: 13, q: 2, k: 2, r: 12 }).is_err());
        // Non-prime p.
        assert!(realize(&GroupRecipe::Psl2 { p: 9 }).is_err());
    }

    #[test]
    fn outer_involution_is_outer() {
        for p in [11, 13, 23] {
            let psl = realize(&GroupRecipe::Psl2 { p }).unwrap();
            let pgl = realize(&GroupRecipe::Pgl2 { p }).unwrap();
            let sigma = outer_involution(p);
            assert_eq!(sigma.order(), 2, "p = {p}");
            assert!(pgl.contains(&sigma), "p = {p}");
            assert!(!psl.contains(&sigma), "p = {p}");
        }
    }

    #[test]
    fn subgroup_location_with_fingerprints() {
        let pgl11 = realize(&GroupRecipe::Pgl2 { p: 11 }).unwrap();
        let mut rand = RandomElements::new(5);
        let s4 = find_subgroup(
            &pgl11,
            &SubgroupDescriptor::plain(SubgroupKind::S4),
            None,
            5000,
            &mut rand,
        )
        .unwrap();
        assert_eq!(s4.order(), 24);
        let d24 = find_subgroup(
            &pgl11,
            &SubgroupDescriptor::plain(SubgroupKind::Dihedral { order: 24 }),
            None,
            5000,
            &mut rand,
        )
        .unwrap();
        assert_eq!(d24.order(), 24);
        // Same order, different isomorphism type: censuses must differ.
        assert_ne!(order_census(&s4), order_census(&d24));

        let psl11 = realize(&GroupRecipe::Psl2 { p: 11 }).unwrap();
        let a5 = find_subgroup(
            &psl11,
            &SubgroupDescriptor::plain(SubgroupKind::A5),
            None,
            5000,
            &mut rand,
        )
        .unwrap();
        assert_eq!(a5.order(), 60);
    }

    #[test]
    fn twisted_class_differs() {
        // The two classes of S4 in PSL(2, 23) are swapped by the outer
        // involution; conjugacy inside the group must fail.
        let psl23 = realize(&GroupRecipe::Psl2 { p: 23 }).unwrap();
        let sigma = outer_involution(23);
        let mut rand = RandomElements::new(9);
        let s4 = find_subgroup(
            &psl23,
            &SubgroupDescriptor::plain(SubgroupKind::S4),
            Some(&sigma),
            5000,
            &mut rand,
        )
        .unwrap();
        let s4t = find_subgroup(
            &psl23,
            &SubgroupDescriptor { kind: SubgroupKind::S4, twisted: true },
            Some(&sigma),
            5000,
            &mut rand,
        )
        .unwrap();
        assert_eq!(s4t.order(), 24);
        assert!(conjugate_in(&psl23, &s4, &s4t).is_none());
    }

    #[test]
    fn set_stabilizer_in_s7() {
        let s7 = realize(&GroupRecipe::Sym { n: 7 }).unwrap();
        let h = set_stabilizer(&s7, &[0, 1, 2]).unwrap();
        assert_eq!(h.order(), 6 * 24);
        assert!(h.is_subgroup_of(&s7));
    }

    #[test]
    fn borel_of_psl2_11() {
        let psl11 = realize(&GroupRecipe::Psl2 { p: 11 }).unwrap();
        let mut rand = RandomElements::new(2);
        let b = borel_in(&psl11, 5000, &mut rand).unwrap();
        assert_eq!(b.order(), 55);
    }

    #[test]
    fn table1_row7_achievable_valencies() {
        let instances = table_instance(1, 7, 3, None, &ZooOptions::default()).unwrap();
        assert_eq!(instances.len(), 1);
        let inst = &instances[0];
        assert!(inst.spec.is_edge_transitive());
        assert!(inst.spec.is_connected());
        assert_eq!(inst.spec.left.order(), inst.spec.right.order());
        // Requesting an impossible valency reports what is achievable.
        match table_instance(1, 7, 7, None, &ZooOptions::default()) {
            Err(Error::Recipe(msg)) => {
                for v in [3, 4, 12, 24] {
                    assert!(msg.contains(&v.to_string()), "{msg}");
                }
            }
            Err(other) => panic!("unexpected error: {other}"),
            Ok(_) => panic!("valency 7 should not be realizable"),
        }
    }

    #[test]
    fn heavy_rows_are_gated() {
        assert!(matches!(
            table_instance(1, 10, 6, None, &ZooOptions::default()),
            Err(Error::Gated(_))
        ));
        assert!(matches!(
            table_instance(1, 13, 21, None, &ZooOptions::default()),
            Err(Error::Gated(_))
        ));
    }

    #[test]
    fn table2_row6_smallest_instance() {
        let instances = table_instance(2, 6, 4, None, &ZooOptions::default()).unwrap();
        assert!(!instances.is_empty());
        let inst = &instances[0];
        assert!(inst.derive);
        assert_eq!((inst.p, inst.q), (13, 2));
        assert_eq!(inst.spec.group.order(), 52);
        // Degree qk = 4; |U| = p = 13, |W| = pq = 26.
        let built = crate::bicoset::build(&inst.spec).unwrap();
        assert_eq!(built.graph.u_size(), 13);
        assert_eq!(built.graph.w_size(), 26);
        assert_eq!(built.graph.u_degree(0), 4);
    }

    #[test]
    fn regular_metacyclic_in_row7() {
        let instances = table_instance(1, 7, 3, None, &ZooOptions::default()).unwrap();
        let built = crate::bicoset::build(&instances[0].spec).unwrap();
        let mut rand = RandomElements::new(11);
        let (r, t, b) = regular_metacyclic_in(&built, 55, 20_000, &mut rand).unwrap();
        assert_eq!(r.order(), 55);
        assert_eq!(t.order(), 11);
        assert_eq!(b.order(), 5);
    }

    #[test]
    fn gray_graph_shape() {
        let g = gray_graph();
        assert_eq!(g.n(), 54);
        let simple = g.to_simple();
        assert_eq!(simple.is_regular(), Some(3));
        assert!(simple.is_connected());
    }

    #[test]
    fn census_roundtrip_via_tempfile() {
        let dir = std::env::temp_dir().join("hamsym-zoo-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("gray.g6");
        std::fs::write(&path, to_graph6(&gray_graph().to_simple())).unwrap();
        let census = load_census_graph(&path).unwrap();
        assert_eq!(census.order, 54);
        assert_eq!(census.valency, Some(3));
        let bip = census.bipartite.expect("Gray graph is bipartite");
        assert_eq!(bip.u_size(), 27);
        // Petersen-style non-bipartite input is tolerated.
        let petersen = {
            let mut edges = Vec::new();
            for i in 0..5 {
                edges.push((i, (i + 1) % 5));
                edges.push((i, i + 5));
                edges.push((i + 5, 5 + (i + 2) % 5));
            }
            SimpleGraph::from_edges(10, &edges).unwrap()
        };
        let ppath = dir.join("petersen.g6");
        std::fs::write(&ppath, to_graph6(&petersen)).unwrap();
        let loaded = load_census_graph(&ppath).unwrap();
        assert!(loaded.bipartite.is_none());
        assert_eq!(loaded.order, 10);
    }
}
