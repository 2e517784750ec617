//! Brute-force verifiers.
//!
//! Everything here recomputes a quantity the library already provides, by
//! a different and deliberately naive route: enumerating codebooks,
//! comparing point sets, or sampling products. Reports nest and serialise
//! to JSON.

use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::codes::{members, proper_subsets, Construction, LatticeIndexCode, Subset, CODEBOOK_CAP};
use crate::error::{Error, Result};
use crate::lattices::{coset_leaders_exact, hnf, nesting_matrix, quotient_size, RealLattice, RingLattice, COSET_CAP};
use crate::rings::{canonical, four_square_pow2_real, rational_primes_up_to, RingElement, RingTag};
use crate::{ExactPoint, Rational};

/// Cap on the number of message tuples enumerated by the injectivity check.
pub const INJECTIVITY_CAP: u128 = 1_000_000;

/// Outcome of a check, possibly made of sub-checks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub name: String,
    pub passed: bool,
    /// Data reproducing a failure. Always present when `passed` is false.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<String>,
    /// Points, pairs or samples examined.
    pub work: u64,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub children: Vec<VerificationReport>,
}

impl VerificationReport {
    pub fn pass(name: impl Into<String>, work: u64) -> Self {
        VerificationReport {
            name: name.into(),
            passed: true,
            witness: None,
            work,
            children: Vec::new(),
        }
    }

    pub fn fail(name: impl Into<String>, witness: impl Into<String>, work: u64) -> Self {
        VerificationReport {
            name: name.into(),
            passed: false,
            witness: Some(witness.into()),
            work,
            children: Vec::new(),
        }
    }

    /// A report that passes iff every child passes.
    pub fn group(name: impl Into<String>, children: Vec<VerificationReport>) -> Self {
        let failed: Vec<&str> = children.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
        VerificationReport {
            name: name.into(),
            passed: failed.is_empty(),
            witness: (!failed.is_empty()).then(|| format!("failed: {}", failed.join(", "))),
            work: children.iter().map(|c| c.work).sum(),
            children,
        }
    }

    /// Names of failing leaves, depth first.
    pub fn failures(&self) -> Vec<&VerificationReport> {
        if self.passed {
            return Vec::new();
        }
        if self.children.is_empty() {
            return vec![self];
        }
        self.children.iter().flat_map(VerificationReport::failures).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }
}

/// Integer coordinates of a point set together with the integer metric,
/// so that squared distances are exact: `d² = vᵀ G v / scale`.
struct IntegerGeometry {
    n: usize,
    coords: Vec<i64>,
    gram: Vec<i128>,
    diagonal: bool,
    scale: i128,
}

impl IntegerGeometry {
    fn new(points: &[ExactPoint], frame_gram: &crate::ExactMatrix) -> Result<Self> {
        let n = frame_gram.rows();
        let den = points.iter().flatten().fold(1i128, |acc, v| acc.lcm(v.denom()));
        let gden = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .fold(1i128, |acc, (i, j)| acc.lcm(frame_gram[(i, j)].denom()));
        let mut coords = Vec::with_capacity(points.len() * n);
        for p in points {
            for v in p {
                let c = (v * den).to_integer();
                coords.push(i64::try_from(c).map_err(|_| Error::InvalidInput(format!("coordinate {v} overflows")))?);
            }
        }
        let gram: Vec<i128> = (0..n * n)
            .map(|k| (frame_gram[(k / n, k % n)] * gden).to_integer())
            .collect();
        let diagonal = (0..n).all(|i| (0..n).all(|j| i == j || gram[i * n + j] == 0));
        Ok(IntegerGeometry {
            n,
            coords,
            gram,
            diagonal,
            scale: den * den * gden,
        })
    }

    fn point(&self, i: usize) -> &[i64] {
        &self.coords[i * self.n..(i + 1) * self.n]
    }

    /// `vᵀ G v` for `v = x_i − x_j`.
    fn dist(&self, i: usize, j: usize) -> i128 {
        let (a, b) = (self.point(i), self.point(j));
        if self.diagonal {
            (0..self.n)
                .map(|k| {
                    let d = (a[k] - b[k]) as i128;
                    self.gram[k * self.n + k] * d * d
                })
                .sum()
        } else {
            let d: Vec<i128> = a.iter().zip(b).map(|(x, y)| (x - y) as i128).collect();
            let mut s = 0;
            for r in 0..self.n {
                for c in 0..self.n {
                    s += d[r] * self.gram[r * self.n + c] * d[c];
                }
            }
            s
        }
    }

    fn to_rational(&self, v: i128) -> Rational {
        Rational::new(v, self.scale)
    }
}

fn check_codebook(code: &LatticeIndexCode) -> Result<()> {
    let size = code.codebook_size();
    if size > CODEBOOK_CAP {
        return Err(Error::CodebookTooLarge { size, cap: CODEBOOK_CAP });
    }
    Ok(())
}

/// `d_S²` by definition: the smallest squared distance between two
/// codewords that agree on the messages in `S`. `S = ∅` gives `d₀²`.
pub fn brute_force_d_s(code: &LatticeIndexCode, s: Subset) -> Result<Rational> {
    check_codebook(code)?;
    let k = code.k();
    if s >> k != 0 || s == (1 << k) - 1 {
        return Err(Error::InvalidInput(format!("mask {s:#b} is not a proper subset of 1..{k}")));
    }
    let book = code.codebook_exact(CODEBOOK_CAP)?;
    let geo = IntegerGeometry::new(&book, &code.lattice().frame_gram())?;
    let known = members(s, k);
    let mut groups: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
    for i in 0..book.len() {
        let t = code.tuple(i as u128);
        groups.entry(known.iter().map(|&m| t[m - 1]).collect()).or_default().push(i);
    }
    let mut best = i128::MAX;
    for idx in groups.values() {
        if idx.len() < 2 {
            return Err(Error::DegenerateSubcode);
        }
        let m = idx
            .par_iter()
            .enumerate()
            .map(|(a, &i)| idx[a + 1..].iter().map(|&j| geo.dist(i, j)).min().unwrap_or(i128::MAX))
            .min()
            .unwrap_or(i128::MAX);
        best = best.min(m);
    }
    Ok(geo.to_rational(best))
}

/// Brute-force `d_S²` for every `S` at once, indexed by mask. Each pair of
/// codewords is visited once and counts for every `S` inside the set of
/// messages on which the pair agrees. The full set has no pairs and maps to
/// `None`.
pub fn brute_force_all(code: &LatticeIndexCode) -> Result<(Vec<Option<Rational>>, u64)> {
    check_codebook(code)?;
    let k = code.k();
    let book = code.codebook_exact(CODEBOOK_CAP)?;
    let geo = IntegerGeometry::new(&book, &code.lattice().frame_gram())?;
    let sizes = code.sizes();
    let tuples: Vec<Vec<u32>> = (0..book.len())
        .map(|i| code.tuple(i as u128).into_iter().map(|v| v as u32).collect())
        .collect();
    let full = 1usize << k;
    let exact = (0..book.len())
        .into_par_iter()
        .fold(
            || vec![i128::MAX; full],
            |mut acc, i| {
                for j in i + 1..book.len() {
                    let agree = (0..k).filter(|&m| tuples[i][m] == tuples[j][m]).fold(0, |a, m| a | 1 << m);
                    let d = geo.dist(i, j);
                    if d < acc[agree] {
                        acc[agree] = d;
                    }
                }
                acc
            },
        )
        .reduce(|| vec![i128::MAX; full], |a, b| a.iter().zip(&b).map(|(x, y)| *x.min(y)).collect());
    debug_assert_eq!(sizes.len(), k);
    let out = (0..full)
        .map(|s| {
            let m = (0..full).filter(|a| a & s == s).map(|a| exact[a]).min().unwrap_or(i128::MAX);
            (m != i128::MAX).then(|| geo.to_rational(m))
        })
        .collect();
    let n = book.len() as u64;
    Ok((out, n * (n - 1) / 2))
}

/// Compares [`brute_force_all`] with [`LatticeIndexCode::distance_sq`] for
/// `S = ∅` and every nonempty proper `S`.
pub fn distance_agreement(code: &LatticeIndexCode) -> Result<VerificationReport> {
    let (brute, work) = brute_force_all(code)?;
    let mut children = Vec::new();
    for s in std::iter::once(0).chain(proper_subsets(code.k())) {
        let name = format!("d_S for S={:?}", members(s, code.k()));
        let lattice = code.distance_sq(s)?;
        children.push(match brute[s as usize] {
            Some(b) if b == lattice => VerificationReport::pass(name, 0),
            other => VerificationReport::fail(name, format!("brute force {other:?}, lattice {lattice}"), 0),
        });
    }
    let mut r = VerificationReport::group("distance agreement", children);
    r.work = work;
    Ok(r)
}

/// Encodes every message tuple of `Σ_k Λ_k/Λ_c` and checks that the images
/// are distinct and form exactly the coset leaders of `Λ/Λ_c`.
pub fn exhaustive_injectivity_parts(components: &[RealLattice], coarse: &RealLattice) -> Result<VerificationReport> {
    let name = "exhaustive injectivity";
    let mut alphabets = Vec::new();
    let mut product: u128 = 1;
    for c in components {
        let size = quotient_size(c, coarse)?;
        product = product.saturating_mul(size);
        if product > INJECTIVITY_CAP {
            return Err(Error::TooLarge {
                size: product,
                cap: INJECTIVITY_CAP,
            });
        }
        alphabets.push(coset_leaders_exact(c, coarse, INJECTIVITY_CAP)?);
    }
    let refs: Vec<&RealLattice> = components.iter().collect();
    let sum = crate::lattices::sum_lattice(&refs)?;
    let n = coarse.dim();
    let mut seen: HashMap<ExactPoint, Vec<usize>> = HashMap::with_capacity(product as usize);
    let mut w = vec![0usize; components.len()];
    for _ in 0..product {
        let mut x = vec![Rational::from_integer(0); n];
        for (k, &v) in w.iter().enumerate() {
            for (a, b) in x.iter_mut().zip(&alphabets[k][v]) {
                *a += b;
            }
        }
        let image = coarse.mod_exact(&x);
        if let Some(prev) = seen.insert(image.clone(), w.clone()) {
            return Ok(VerificationReport::fail(
                name,
                format!("messages {prev:?} and {w:?} both encode to {}", fmt_point(&image)),
                seen.len() as u64 + 1,
            ));
        }
        for (k, a) in alphabets.iter().enumerate() {
            w[k] += 1;
            if w[k] < a.len() {
                break;
            }
            w[k] = 0;
        }
    }
    let leaders: HashSet<ExactPoint> = coset_leaders_exact(&sum, coarse, COSET_CAP.max(product))?.into_iter().collect();
    let images: HashSet<ExactPoint> = seen.into_keys().collect();
    if images != leaders {
        let stray = images.difference(&leaders).next().or_else(|| leaders.difference(&images).next());
        return Ok(VerificationReport::fail(
            name,
            format!(
                "{} images vs {} coset leaders; first difference {}",
                images.len(),
                leaders.len(),
                stray.map_or_else(String::new, |p| fmt_point(p))
            ),
            product as u64,
        ));
    }
    Ok(VerificationReport::pass(name, product as u64))
}

pub fn exhaustive_injectivity(code: &LatticeIndexCode) -> Result<VerificationReport> {
    exhaustive_injectivity_parts(code.components(), code.coarse())
}

/// Cap on the number of tuples enumerated by [`coset_injectivity_parts`].
pub const KERNEL_CAP: u128 = 10_000_000_000;

/// Exhaustive injectivity for codes too large to hold their codebook.
///
/// The encoder factors through the sum map `⊕_k Λ_k/Λ_c → Λ/Λ_c`, a group
/// homomorphism, so it is injective iff the all-zero tuple is the only one
/// whose codeword lies in `Λ_c`. Every tuple is encoded and tested. Points
/// are kept as residues `D·H⁻¹c mod D`, where `c` are integer coordinates in
/// `Λ`, `H` is the Hermite form of `Λ_c` in those coordinates and
/// `D = det H`; a point lies in `Λ_c` iff all residues vanish. Also checks
/// that each alphabet hits distinct cosets and that the alphabet product
/// equals `|Λ/Λ_c|`, so injective implies bijective.
pub fn coset_injectivity_parts(components: &[RealLattice], coarse: &RealLattice) -> Result<VerificationReport> {
    let name = "exhaustive injectivity (kernel)";
    let refs: Vec<&RealLattice> = components.iter().collect();
    let fine = crate::lattices::sum_lattice(&refs)?;
    let n = fine.dim();
    let x = nesting_matrix(&fine, coarse)?;
    let rows: Vec<Vec<i128>> = x.to_rows().iter().map(|r| r.iter().map(|v| v.to_integer()).collect()).collect();
    let h = crate::ExactMatrix::from_rows(hnf(&rows)?.into_iter().map(|r| r.into_iter().map(Rational::from_integer).collect()).collect());
    let det = h.determinant().to_integer();
    let cosets = det as u128;
    let scaled_inv = h.inverse().expect("full rank").scaled(&Rational::from_integer(det));

    let mut product: u128 = 1;
    let mut alphabets: Vec<Vec<Vec<u64>>> = Vec::new();
    for (k, c) in components.iter().enumerate() {
        let size = quotient_size(c, coarse)?;
        product = product.saturating_mul(size);
        if product > KERNEL_CAP {
            return Err(Error::TooLarge { size: product, cap: KERNEL_CAP });
        }
        let mut residues = Vec::with_capacity(size as usize);
        for p in coset_leaders_exact(c, coarse, size)? {
            let coords = fine.coefficients(&p).ok_or(Error::NotNested)?;
            let coords: Vec<Rational> = coords.iter().map(|&v| Rational::from_integer(v as i128)).collect();
            let r: Vec<u64> = scaled_inv
                .mul_vec(&coords)
                .iter()
                .map(|v| v.to_integer().rem_euclid(det) as u64)
                .collect();
            residues.push(r);
        }
        let distinct: HashSet<&Vec<u64>> = residues.iter().collect();
        if distinct.len() != residues.len() {
            return Ok(VerificationReport::fail(
                name,
                format!("alphabet {} repeats a coset of Λ_c", k + 1),
                residues.len() as u64,
            ));
        }
        alphabets.push(residues);
    }
    if product != cosets {
        return Ok(VerificationReport::fail(
            name,
            format!("alphabet product {product} but |Λ/Λ_c| = {cosets}"),
            0,
        ));
    }

    let d = det as u64;
    let (last, prefix) = alphabets.split_last().expect("at least one component");
    let prefixes: u64 = prefix.iter().map(|a| a.len() as u64).product();
    // The zero tuple is in the kernel; any other kernel element is a witness.
    let witness = (0..prefixes).into_par_iter().find_map_any(|mut p| {
        let mut w = Vec::with_capacity(alphabets.len());
        let mut base = vec![0u64; n];
        for a in prefix {
            let v = (p % a.len() as u64) as usize;
            p /= a.len() as u64;
            w.push(v);
            for (b, x) in base.iter_mut().zip(&a[v]) {
                *b = (*b + x) % d;
            }
        }
        last.iter().enumerate().find_map(|(v, a)| {
            let in_kernel = base.iter().zip(a).all(|(b, x)| b + x == 0 || b + x == d);
            let zero = v == 0 && w.iter().all(|&x| x == 0);
            (in_kernel && !zero).then(|| {
                let mut w = w.clone();
                w.push(v);
                w
            })
        })
    });
    if let Some(w) = witness {
        let zero = vec![0; w.len()];
        return Ok(VerificationReport::fail(
            name,
            format!("messages {zero:?} and {w:?} both encode to the origin"),
            product as u64,
        ));
    }
    Ok(VerificationReport::pass(name, product as u64))
}

pub fn coset_injectivity(code: &LatticeIndexCode) -> Result<VerificationReport> {
    coset_injectivity_parts(code.components(), code.coarse())
}

fn fmt_point(p: &[Rational]) -> String {
    let v: Vec<String> = p.iter().map(ToString::to_string).collect();
    format!("({})", v.join(", "))
}

fn fmt_vec(v: &[RingElement]) -> String {
    let v: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", v.join(", "))
}

/// Uniform Hurwitz integer with coordinates in `[-r, r]`.
fn random_hurwitz(rng: &mut ChaCha8Rng, r: i64) -> RingElement {
    let half = rng.random_bool(0.5);
    let c: [i64; 4] = std::array::from_fn(|_| {
        let v = rng.random_range(-r..=r);
        if half {
            2 * v + 1
        } else {
            2 * v
        }
    });
    RingElement::hurwitz_doubled(c).expect("coordinates share parity")
}

/// Right-module structure of a Hurwitz lattice:
///
/// * exact closure of the ℤ-basis under right multiplication by `1, i, j, k`
///   and `(1+i+j+k)/2`;
/// * the identity `A(1+i) = (1+i)C` with `C = a + bi + dj − ck` for random
///   `A = a + bi + cj + dk`;
/// * `V·A ∈ L` for random lattice vectors `V` and ring elements `A`.
pub fn right_module_check(l: &RingLattice, trials: u64, seed: u64) -> Result<VerificationReport> {
    if l.ring != RingTag::Hurwitz {
        return Err(Error::RingMismatch(format!("right-module check needs a Hurwitz lattice, not {}", l.ring)));
    }
    let mut children = Vec::new();
    let basis = l.z_basis();

    children.push(match l.right_closure_witness()? {
        None => VerificationReport::pass("right closure of the basis", (basis.len() * 4) as u64),
        Some((v, e)) => VerificationReport::fail(
            "right closure of the basis",
            format!("V = {} times {e} leaves the lattice", fmt_vec(&v)),
            (basis.len() * 4) as u64,
        ),
    });

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u = RingElement::quaternion(1, 1, 0, 0);
    let mut bad = None;
    for _ in 0..trials {
        let a = random_hurwitz(&mut rng, 20);
        let [a0, a1, a2, a3] = *a.coords() else { unreachable!() };
        let c = RingElement::hurwitz_doubled([a0, a1, a3, -a2]).expect("same parity");
        if a * u != u * c {
            bad = Some(a);
            break;
        }
    }
    children.push(match bad {
        None => VerificationReport::pass("conjugation by 1+i", trials),
        Some(a) => VerificationReport::fail("conjugation by 1+i", format!("A = {a}"), trials),
    });

    let lattice = l.real_embedding()?;
    let mut bad = None;
    for _ in 0..trials {
        let z: Vec<i64> = (0..basis.len()).map(|_| rng.random_range(-5..=5)).collect();
        let v: Vec<RingElement> = (0..l.rank())
            .map(|r| {
                basis
                    .iter()
                    .zip(&z)
                    .fold(RingElement::zero(RingTag::Hurwitz), |acc, (b, &c)| acc + b[r].scale(c))
            })
            .collect();
        let a = random_hurwitz(&mut rng, 5);
        let w: Vec<RingElement> = v.iter().map(|x| *x * a).collect();
        if !lattice.contains(&l.frame_of(&w)) {
            bad = Some((v, a));
            break;
        }
    }
    children.push(match bad {
        None => VerificationReport::pass("sampled right products", trials),
        Some((v, a)) => VerificationReport::fail(
            "sampled right products",
            format!("V = {} times A = {a} leaves the lattice", fmt_vec(&v)),
            trials,
        ),
    });
    Ok(VerificationReport::group("right module", children))
}

/// Structural identities of a constructed code:
///
/// * the gcd of `M_k` over `k ∉ S` equals `∏_{ℓ∈S} φ_ℓ` up to units
///   (commutative rings) or has norm `N(D_S)` with
///   `N(D_S)ⁿ = (∏_{k∈S}|Λ_k/Λ_c|)²` (Hurwitz);
/// * `Σ_{k∉S} Λ_k` equals the lattice generated by that gcd;
/// * `d_S²/d₀² = 2^{2R_S}` exactly;
/// * the codebook is `Λ/Λ_c`, exhaustively when small and otherwise by
///   counting (a surjective homomorphism between groups of equal order).
pub fn lemma_suite(code: &LatticeIndexCode) -> Result<VerificationReport> {
    let k = code.k();
    let n = code.dim();
    let all_s: Vec<Subset> = std::iter::once(0).chain(proper_subsets(k)).collect();
    let mut children = Vec::new();

    match code.construction() {
        Construction::Crt { primes, .. } => {
            let mut checks = Vec::new();
            for &s in &all_s {
                let d = code.ring_divisor(s).expect("ring code")?;
                let want = members(s, k)
                    .iter()
                    .fold(RingElement::one(primes[0].tag()), |acc, &m| acc * primes[m - 1]);
                let name = format!("S={:?}", members(s, k));
                checks.push(if canonical(&d) == canonical(&want) {
                    VerificationReport::pass(name, 1)
                } else {
                    VerificationReport::fail(name, format!("gcd {d}, product of primes {want}"), 1)
                });
            }
            children.push(VerificationReport::group("gcd identity", checks));
        }
        Construction::Hurwitz { .. } => {
            let mut checks = Vec::new();
            for &s in &all_s {
                let d = code.ring_divisor(s).expect("ring code")?;
                let lhs = BigInt::from(d.norm()).pow(n as u32);
                let rhs = BigInt::from(code.subset_size(s)).pow(2);
                let name = format!("S={:?}", members(s, k));
                checks.push(if lhs == rhs {
                    VerificationReport::pass(name, 1)
                } else {
                    VerificationReport::fail(
                        name,
                        format!("N(D_S) = {} but subset size is {}", d.norm(), code.subset_size(s)),
                        1,
                    )
                });
            }
            children.push(VerificationReport::group("gcrd norm", checks));
        }
        Construction::Custom => {}
    }

    if code.base().is_some() {
        let mut checks = Vec::new();
        for &s in &all_s {
            let geometric = code.complement_sum(s)?;
            let ring = code.ring_sum_lattice(s).expect("ring code")?;
            let name = format!("S={:?}", members(s, k));
            checks.push(if geometric.same_lattice(&ring) {
                VerificationReport::pass(name, 1)
            } else {
                VerificationReport::fail(
                    name,
                    format!(
                        "HNF of the sum {:?} differs from HNF of the ring lattice {:?}",
                        geometric.canonical_basis().to_rows(),
                        ring.canonical_basis().to_rows()
                    ),
                    1,
                )
            });
        }
        children.push(VerificationReport::group("sum lattice", checks));
    }

    let d0 = code.complement_sum(0)?.min_distance_sq()?;
    let mut checks = Vec::new();
    for s in proper_subsets(k) {
        let ratio = code.complement_sum(s)?.min_distance_sq()? / d0;
        let size = code.subset_size(s);
        let name = format!("S={:?}", members(s, k));
        checks.push(if crate::codes::ratio_law_holds(ratio, n, size) {
            VerificationReport::pass(name, 1)
        } else {
            VerificationReport::fail(name, format!("d_S²/d₀² = {ratio}, subset size {size}, n = {n}"), 1)
        });
    }
    children.push(VerificationReport::group("uniform gain law", checks));

    let product = code.codebook_size();
    children.push(if product <= INJECTIVITY_CAP {
        let mut r = exhaustive_injectivity(code)?;
        r.name = "codebook equals quotient (exhaustive)".into();
        r
    } else {
        let quotient = quotient_size(code.lattice(), code.coarse())?;
        let name = "codebook equals quotient (counting)";
        if quotient == product {
            VerificationReport::pass(name, 1)
        } else {
            VerificationReport::fail(name, format!("alphabet product {product}, |Λ/Λ_c| = {quotient}"), 1)
        }
    });

    Ok(VerificationReport::group("lemma suite", children))
}

/// Builds the code for `(ring, primes, base)` and runs [`lemma_suite`].
/// Hurwitz primes are odd rational primes.
pub fn lemma_suite_for(ring: RingTag, primes: &[RingElement], base: &RingLattice) -> Result<VerificationReport> {
    let code = if ring == RingTag::Hurwitz {
        let odd: Vec<i64> = primes
            .iter()
            .map(|p| {
                let c = p.coords();
                if c[1..].iter().any(|&v| v != 0) || c[0] % 2 != 0 {
                    Err(Error::InvalidInput(format!("{p} is not a rational integer")))
                } else {
                    Ok(c[0] / 2)
                }
            })
            .collect::<Result<_>>()?;
        LatticeIndexCode::construct_hurwitz(&odd, base)?
    } else {
        LatticeIndexCode::construct_crt(ring, primes, base)?
    };
    lemma_suite(&code)
}

/// Every odd prime `p ≤ max_prime` is the norm of a Hurwitz integer with
/// real part 1 or 2. The norm is recomputed from the coordinates.
pub fn odd_prime_decompositions(max_prime: i64) -> VerificationReport {
    let mut children = Vec::new();
    for p in rational_primes_up_to(max_prime).into_iter().filter(|&p| p > 2) {
        let name = format!("p = {p}");
        match four_square_pow2_real(p) {
            Ok(q) => {
                // Doubled coordinates: a Lipschitz element has even entries.
                let c = q.coords();
                let norm4: i64 = c.iter().map(|v| v * v).sum();
                let re = c[0];
                if norm4 == 4 * p && (re == 2 || re == 4) {
                    children.push(VerificationReport::pass(name, 1));
                } else {
                    children.push(VerificationReport::fail(name, format!("{q} has norm {} and real part {}", norm4 / 4, re / 2), 1));
                }
            }
            Err(e) => children.push(VerificationReport::fail(name, e.to_string(), 1)),
        }
    }
    VerificationReport::group(format!("odd primes up to {max_prime}"), children)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::mask_of;
    use crate::lattices::BaseLattice;

    fn r(v: i64) -> Rational {
        Rational::from_integer(v as i128)
    }

    fn example1() -> LatticeIndexCode {
        let p = [2, 3, 5].map(RingElement::rational);
        LatticeIndexCode::construct_crt(RingTag::Rational, &p, &RingLattice::integers()).unwrap()
    }

    fn example6() -> LatticeIndexCode {
        let g = RingElement::gaussian;
        LatticeIndexCode::construct_crt(RingTag::Gaussian, &[g(1, 2), g(1, -2)], &RingLattice::gaussian()).unwrap()
    }

    #[test]
    fn example1_brute_force() {
        let c = example1();
        assert_eq!(brute_force_d_s(&c, mask_of(&[1])).unwrap(), r(4));
        assert_eq!(brute_force_d_s(&c, mask_of(&[1, 2])).unwrap(), r(36));
        assert_eq!(brute_force_d_s(&c, 0).unwrap(), r(1));
        let (all, work) = brute_force_all(&c).unwrap();
        assert_eq!(work, 30 * 29 / 2);
        assert_eq!(all[0b111], None);
        for s in 0..7u32 {
            assert_eq!(all[s as usize], Some(brute_force_d_s(&c, s).unwrap()));
        }
        assert!(distance_agreement(&c).unwrap().passed);
        assert!(brute_force_d_s(&c, 0b111).is_err());
    }

    #[test]
    fn eisenstein_uses_exact_metric() {
        let w = RingElement::eisenstein;
        let c = LatticeIndexCode::construct_crt(RingTag::Eisenstein, &[w(2, 0), w(2, 3)], &RingLattice::eisenstein())
            .unwrap();
        let r = distance_agreement(&c).unwrap();
        assert!(r.passed, "{}", r.to_json());
        assert_eq!(brute_force_d_s(&c, 0).unwrap(), Rational::from_integer(1));
    }

    #[test]
    fn injectivity() {
        let r = exhaustive_injectivity(&example1()).unwrap();
        assert!(r.passed);
        assert_eq!(r.work, 30);
        let broken = exhaustive_injectivity_parts(
            &[RealLattice::scaled_integer(2, 1), RealLattice::scaled_integer(3, 1)],
            &RealLattice::scaled_integer(12, 1),
        )
        .unwrap();
        assert!(!broken.passed);
        assert!(broken.witness.unwrap().contains("both encode"));
    }

    #[test]
    fn kernel_check_agrees_with_point_sets() {
        let a = coset_injectivity(&example1()).unwrap();
        assert!(a.passed, "{:?}", a.witness);
        assert_eq!(a.work, 30);
        let parts = [RealLattice::scaled_integer(2, 1), RealLattice::scaled_integer(3, 1)];
        let broken = coset_injectivity_parts(&parts, &RealLattice::scaled_integer(12, 1)).unwrap();
        assert!(!broken.passed);
        let p = [RingElement::gaussian(1, 2), RingElement::gaussian(1, -2), RingElement::gaussian(1, 1)];
        let code = LatticeIndexCode::construct_crt(RingTag::Gaussian, &p, &RingLattice::gaussian()).unwrap();
        assert!(coset_injectivity(&code).unwrap().passed);
        assert!(exhaustive_injectivity(&code).unwrap().passed);
        let twisted = [
            RealLattice::from_integer_rows(&[vec![4, 2], vec![0, 3]]).unwrap(),
            RealLattice::from_integer_rows(&[vec![0, 3], vec![4, 2]]).unwrap(),
        ];
        let coarse = RealLattice::scaled_integer(12, 2);
        assert_eq!(
            coset_injectivity_parts(&twisted, &coarse).unwrap().passed,
            exhaustive_injectivity_parts(&twisted, &coarse).unwrap().passed
        );
    }

    #[test]
    fn injectivity_cap() {
        let big = [RealLattice::scaled_integer(1, 2), RealLattice::scaled_integer(1, 2)];
        let r = exhaustive_injectivity_parts(&big, &RealLattice::scaled_integer(1001, 2));
        assert!(matches!(r, Err(Error::TooLarge { .. })));
    }

    #[test]
    fn codebook_cap() {
        let c = LatticeIndexCode::construct_custom(
            vec![RealLattice::scaled_integer(2, 2), RealLattice::scaled_integer(201, 2)],
            RealLattice::scaled_integer(402, 2),
        )
        .unwrap();
        assert!(matches!(brute_force_d_s(&c, 0), Err(Error::CodebookTooLarge { .. })));
    }

    #[test]
    fn module_checks() {
        let r = right_module_check(&BaseLattice::E8.lattice(), 200, 1).unwrap();
        assert!(r.passed, "{}", r.to_json());
        assert!(right_module_check(&RingLattice::hurwitz(), 200, 2).unwrap().passed);
        assert!(right_module_check(&RingLattice::gaussian(), 10, 0).is_err());

        let q = RingElement::quaternion;
        let twist = q(1, 1, 1, 0);
        let gen = vec![vec![q(1, 1, 0, 0) * twist, q(1, 0, 0, 0)], vec![q(0, 0, 0, 0), q(1, 0, 0, 0)]];
        let broken = RingLattice::new(RingTag::Hurwitz, gen).unwrap();
        let r = right_module_check(&broken, 200, 3).unwrap();
        assert!(!r.passed);
        assert!(r.failures().iter().all(|f| f.witness.is_some()));
        assert!(!r.children[0].passed);
        assert!(r.children[1].passed);
    }

    #[test]
    fn lemmas_hold() {
        let r = lemma_suite(&example1()).unwrap();
        assert!(r.passed, "{}", r.to_json());
        assert_eq!(r.children.len(), 4);
        let r = lemma_suite(&example6()).unwrap();
        assert!(r.passed, "{}", r.to_json());
        let r = lemma_suite_for(
            RingTag::Hurwitz,
            &[RingElement::from_int(RingTag::Hurwitz, 3), RingElement::from_int(RingTag::Hurwitz, 5)],
            &RingLattice::hurwitz(),
        )
        .unwrap();
        assert!(r.passed, "{}", r.to_json());
        assert_eq!(r.children[0].children.len(), 15);
    }

    #[test]
    fn custom_code_lemmas() {
        let g1 = RealLattice::from_integer_rows(&[vec![4, 2], vec![0, 3]]).unwrap();
        let g2 = RealLattice::from_integer_rows(&[vec![0, 3], vec![4, 2]]).unwrap();
        let c = LatticeIndexCode::construct_custom(vec![g1, g2], RealLattice::scaled_integer(12, 2)).unwrap();
        let r = lemma_suite(&c).unwrap();
        // Example 4 is injective but its gains are not uniform.
        assert!(!r.passed);
        assert_eq!(r.failures().len(), 2);
        assert!(r.children[1].passed);
    }

    #[test]
    fn odd_primes_decompose() {
        let r = odd_prime_decompositions(199);
        assert!(r.passed, "{:?}", r.failures());
        assert_eq!(r.children.len(), 45);
    }

    #[test]
    fn report_json_roundtrip() {
        let r = VerificationReport::group(
            "top",
            vec![VerificationReport::pass("a", 3), VerificationReport::fail("b", "x = 1", 2)],
        );
        assert!(!r.passed);
        assert_eq!(r.work, 5);
        let back: VerificationReport = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
        assert_eq!(r.failures()[0].name, "b");
    }
}
