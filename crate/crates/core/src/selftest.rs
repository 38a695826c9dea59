//! Property suites: mapping-class relations, randomized Kirby-move
//! invariance, the PALF/Kirby oracle and Smith normal form checks.
//!
//! Randomized suites derive one generator per case from `seed + case`, so a
//! run is reproducible and independent of how cases are scheduled.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::curves::{FiberModel, StandardCurve};
use crate::forms;
use crate::kirby::{self, KirbyDiagram, Move};
use crate::linalg::{self, IntMatrix};
use crate::mcg::{self, BraidWord};
use crate::palf::PalfDescription;
use crate::par;

/// Outcome of one suite.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteResult {
    pub name: String,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl SuiteResult {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }

    fn from_cases(name: &str, results: Vec<Result<(), String>>) -> Self {
        let cases = results.len();
        let failures = results
            .into_iter()
            .enumerate()
            .filter_map(|(i, r)| r.err().map(|e| format!("case {i}: {e}")))
            .collect();
        SuiteResult { name: name.into(), cases, failures }
    }
}

fn rng_for(seed: u64, case: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_add(case as u64))
}

fn curve(s: &str) -> StandardCurve {
    s.parse().expect("literal curve")
}

/// `t_{123} t_1 t_2 t_3 = t_{12} t_{13} t_{23}` on the 3-holed disk.
pub fn lantern() -> SuiteResult {
    let f = FiberModel::new(3).expect("3 holes");
    let lhs: Vec<StandardCurve> = ["{1,2,3}", "{1}", "{2}", "{3}"].iter().map(|s| curve(s)).collect();
    let rhs: Vec<StandardCurve> = ["{2,3}", "{1,3}", "{1,2}"].iter().map(|s| curve(s)).collect();
    let result = match (mcg::product_of_twists(f, &lhs), mcg::product_of_twists(f, &rhs)) {
        (Ok(a), Ok(b)) if a == b => Ok(()),
        (Ok(_), Ok(_)) => Err("lantern relation fails".to_string()),
        (Err(e), _) | (_, Err(e)) => Err(e.to_string()),
    };
    SuiteResult::from_cases("lantern relation (h=3)", vec![result])
}

/// Artin relations on free groups of rank 2..=`max_rank`.
pub fn braid_relations(max_rank: usize) -> SuiteResult {
    let mut results = Vec::new();
    for rank in 2..=max_rank {
        let act = |w: BraidWord| mcg::artin_action(rank, &w).map_err(|e| e.to_string());
        for i in 1..rank {
            let s = |j: usize, p: bool| BraidWord::sigma(j, p);
            results.push((|| {
                if !act(s(i, true).then(&s(i, false)))?.is_identity() {
                    return Err(format!("sigma_{i} sigma_{i}^-1 != 1 (rank {rank})"));
                }
                if i + 1 < rank {
                    let a = act(s(i, true).then(&s(i + 1, true)).then(&s(i, true)))?;
                    let b = act(s(i + 1, true).then(&s(i, true)).then(&s(i + 1, true)))?;
                    if a != b {
                        return Err(format!("braid relation fails for sigma_{i} (rank {rank})"));
                    }
                }
                for j in i + 2..rank {
                    if act(s(i, true).then(&s(j, true)))? != act(s(j, true).then(&s(i, true)))? {
                        return Err(format!("sigma_{i} and sigma_{j} do not commute (rank {rank})"));
                    }
                }
                Ok(())
            })());
        }
    }
    SuiteResult::from_cases("braid relations", results)
}

/// Twists along disjoint standard curves commute, for every pair with `h ≤ max_h`.
pub fn commutation(max_h: usize) -> SuiteResult {
    let mut results = Vec::new();
    for h in 1..=max_h {
        let f = FiberModel::new(h).expect("h >= 1");
        let curves = f.all_curves();
        let twists: Vec<_> = par::map(&curves, |c| mcg::dehn_twist(c, f, true).expect("on fiber"));
        let pairs: Vec<(usize, usize)> = (0..curves.len())
            .flat_map(|a| (a + 1..curves.len()).map(move |b| (a, b)))
            .filter(|&(a, b)| curves[a].disjoint(&curves[b], f).unwrap_or(false))
            .collect();
        results.extend(par::map(&pairs, |&(a, b)| {
            let ab = twists[a].compose(&twists[b]).map_err(|e| e.to_string())?;
            let ba = twists[b].compose(&twists[a]).map_err(|e| e.to_string())?;
            if ab == ba {
                Ok(())
            } else {
                Err(format!("twists along disjoint {} and {} do not commute (h={h})", curves[a], curves[b]))
            }
        }));
    }
    SuiteResult::from_cases(&format!("disjoint twists commute (h<={max_h})"), results)
}

/// `t ∘ t⁻¹ = id` for random twists.
pub fn twist_inverses(seed: u64, cases: usize) -> SuiteResult {
    let idx: Vec<usize> = (0..cases).collect();
    let results = par::map(&idx, |&i| {
        let mut rng = rng_for(seed, i);
        let f = FiberModel::new(rng.gen_range(1..=6)).expect("h >= 1");
        let c = random_curve(&mut rng, f.holes());
        let t = mcg::dehn_twist(&c, f, true).map_err(|e| e.to_string())?;
        let ti = mcg::dehn_twist(&c, f, false).map_err(|e| e.to_string())?;
        if t.compose(&ti).map_err(|e| e.to_string())?.is_identity() && ti.compose(&t).map_err(|e| e.to_string())?.is_identity() {
            Ok(())
        } else {
            Err(format!("t∘t⁻¹ != id for {c} on h={}", f.holes()))
        }
    });
    SuiteResult::from_cases("twist inverses", results)
}

pub fn random_curve<R: Rng>(rng: &mut R, h: usize) -> StandardCurve {
    loop {
        let holes: Vec<usize> = (1..=h).filter(|_| rng.gen_bool(0.5)).collect();
        if let Ok(c) = StandardCurve::new(holes) {
            return c;
        }
    }
}

/// A random diagram with `d ≤ max_d` dotted circles, `k ≤ max_k` handles and
/// entries in `[−max_entry, max_entry]`. Pairs with `|N| ≤ 1` are certified
/// geometric with probability ½ so that cancellations occur.
pub fn random_diagram<R: Rng>(rng: &mut R, max_d: usize, max_k: usize, max_entry: i64) -> KirbyDiagram {
    let d = rng.gen_range(0..=max_d);
    let k = rng.gen_range(0..=max_k);
    let mut l = IntMatrix::zeros(k, k);
    for a in 0..k {
        for b in a..k {
            let x = rng.gen_range(-max_entry..=max_entry);
            l[(a, b)] = x;
            l[(b, a)] = x;
        }
    }
    let mut n = IntMatrix::zeros(k, d);
    for a in 0..k {
        for i in 0..d {
            n[(a, i)] = rng.gen_range(-max_entry..=max_entry);
        }
    }
    let mut dgm = KirbyDiagram::new(d, l, n.clone()).expect("consistent");
    for a in 0..k {
        for i in 0..d {
            if n[(a, i)].abs() <= 1 && rng.gen_bool(0.5) {
                dgm.set_bound(a + 1, i + 1, Some(n[(a, i)].unsigned_abs() as u32)).expect("bound = |N|");
            }
        }
    }
    dgm
}

/// Every move worth trying on `dgm` (preconditions are checked on application).
pub fn candidate_moves(dgm: &KirbyDiagram) -> Vec<Move> {
    let (k, d) = (dgm.handles(), dgm.dotted());
    let mut out = vec![Move::AddPair, Move::BlowUp { positive: true }, Move::BlowUp { positive: false }];
    for h in 1..=k {
        for positive in [true, false] {
            out.extend((1..=k).filter(|&o| o != h).map(|over| Move::Slide { handle: h, over, positive }));
            out.extend((1..=d).map(|dotted| Move::SlideUnder { handle: h, dotted, positive }));
        }
        out.extend((1..=d).filter(|&i| dgm.geometric_linking_one(h, i)).map(|dotted| Move::Cancel { handle: h, dotted }));
        if dgm.framings()[h - 1].abs() == 1 {
            out.push(Move::BlowDown { handle: h });
        }
    }
    out
}

/// Applies up to `max_len` random legal moves, checking each with an exact
/// transport witness and the whole sequence against the starting invariants.
pub fn kirby_invariance_case<R: Rng>(rng: &mut R, start: &KirbyDiagram, max_len: usize) -> Result<Vec<Move>, String> {
    let inv0 = start.invariants().map_err(|e| e.to_string())?;
    let len = rng.gen_range(1..=max_len);
    let mut cur = start.clone();
    let mut applied = Vec::new();
    let mut blown = 0i64;
    let mut sig_shift = 0i64;
    for _ in 0..len {
        let mut moves = candidate_moves(&cur);
        moves.shuffle(rng);
        // keep sizes modest: prefer moves that do not grow the diagram once it is large
        if cur.handles() >= 8 {
            moves.retain(|m| !matches!(m, Move::AddPair | Move::BlowUp { .. }));
        }
        let Some((mv, next, t)) = moves.iter().find_map(|mv| cur.apply(mv).ok().map(|(n, t)| (*mv, n, t))) else {
            break;
        };
        kirby::verify_move(&cur, &next, &t, mv.chi_delta()).map_err(|e| format!("after {applied:?} then {mv}: {e}"))?;
        let (f0, f1) = (cur.intersection_form().map_err(|e| e.to_string())?, next.intersection_form().map_err(|e| e.to_string())?);
        match mv {
            Move::BlowUp { positive } => {
                blown += 1;
                sig_shift += if positive { 1 } else { -1 };
            }
            Move::BlowDown { handle } => {
                blown -= 1;
                sig_shift -= cur.framings()[handle - 1];
            }
            _ => {
                if let Some(o) = forms::obstruction(&f0, &f1) {
                    return Err(format!("{mv} changed the form's {o}: {f0} -> {f1}"));
                }
            }
        }
        applied.push(mv);
        cur = next;
    }
    let inv1 = cur.invariants().map_err(|e| e.to_string())?;
    if inv1.h1 != inv0.h1 {
        return Err(format!("H1 {} -> {} after {applied:?}", inv0.h1, inv1.h1));
    }
    if inv1.boundary_h1 != inv0.boundary_h1 {
        return Err(format!("boundary H1 {} -> {} after {applied:?}", inv0.boundary_h1, inv1.boundary_h1));
    }
    if inv1.b2 as i64 != inv0.b2 as i64 + blown || inv1.signature != inv0.signature + sig_shift {
        return Err(format!("b2/signature {}/{} -> {}/{} after {applied:?}", inv0.b2, inv0.signature, inv1.b2, inv1.signature));
    }
    Ok(applied)
}

/// Randomized Kirby-move invariance over `cases` diagrams.
pub fn kirby_invariance(seed: u64, cases: usize) -> SuiteResult {
    let idx: Vec<usize> = (0..cases).collect();
    let results = par::map(&idx, |&i| {
        let mut rng = rng_for(seed, i);
        let d = random_diagram(&mut rng, 3, 6, 3);
        kirby_invariance_case(&mut rng, &d, 10).map(|_| ())
    });
    SuiteResult::from_cases("Kirby-move invariance", results)
}

pub fn random_palf<R: Rng>(rng: &mut R, max_h: usize, max_k: usize) -> PalfDescription {
    let f = FiberModel::new(rng.gen_range(1..=max_h)).expect("h >= 1");
    let k = rng.gen_range(0..=max_k);
    let cycles = (0..k).map(|_| random_curve(rng, f.holes())).collect();
    PalfDescription::new(f, cycles).expect("curves on fiber")
}

/// PALF invariants from kernel restriction agree with the Kirby-module path.
pub fn palf_oracle_case(p: &PalfDescription) -> Result<(), String> {
    let a = p.invariants();
    let b = p.to_kirby().invariants().map_err(|e| e.to_string())?;
    if (a.chi, &a.h1, a.b2, &a.form) != (b.chi, &b.h1, b.b2, &b.form) {
        return Err(format!(
            "{:?}: palf chi={} H1={} b2={} form={} vs kirby chi={} H1={} b2={} form={}",
            p.cycles(),
            a.chi,
            a.h1,
            a.b2,
            a.form,
            b.chi,
            b.h1,
            b.b2,
            b.form
        ));
    }
    Ok(())
}

pub fn palf_oracle(seed: u64, cases: usize) -> SuiteResult {
    let idx: Vec<usize> = (0..cases).collect();
    let results = par::map(&idx, |&i| palf_oracle_case(&random_palf(&mut rng_for(seed, i), 4, 5)));
    SuiteResult::from_cases("PALF vs Kirby oracle", results)
}

/// `D = U M V` with `U`, `V` unimodular and `D` a divisibility chain.
pub fn snf_case(m: &IntMatrix) -> Result<(), String> {
    let s = linalg::smith_normal_form(m);
    let prod = s.u.mul(&m.to_big()).and_then(|x| x.mul(&s.v)).map_err(|e| e.to_string())?;
    if prod != s.d {
        return Err(format!("U M V != D for {m}"));
    }
    if !linalg::is_unimodular(&s.u) || !linalg::is_unimodular(&s.v) {
        return Err(format!("transforms not unimodular for {m}"));
    }
    let f = s.invariant_factors();
    for i in 0..s.d.rows() {
        for j in 0..s.d.cols() {
            if i != j && s.d[(i, j)] != num_bigint::BigInt::from(0) {
                return Err(format!("D not diagonal for {m}"));
            }
        }
    }
    if f.iter().any(|x| x.sign() != num_bigint::Sign::Plus) || f.windows(2).any(|w| &w[1] % &w[0] != num_bigint::BigInt::from(0)) {
        return Err(format!("invariant factors {f:?} do not form a divisibility chain"));
    }
    if f.len() != linalg::rank(m) {
        return Err(format!("rank mismatch for {m}"));
    }
    Ok(())
}

pub fn random_matrix<R: Rng>(rng: &mut R, max_dim: usize, max_entry: i64) -> IntMatrix {
    let (r, c) = (rng.gen_range(0..=max_dim), rng.gen_range(0..=max_dim));
    let data = (0..r * c).map(|_| rng.gen_range(-max_entry..=max_entry)).collect();
    IntMatrix::from_vec(r, c, data).expect("sized")
}

pub fn snf_properties(seed: u64, cases: usize) -> SuiteResult {
    let idx: Vec<usize> = (0..cases).collect();
    let results = par::map(&idx, |&i| snf_case(&random_matrix(&mut rng_for(seed, i), 5, 9)));
    SuiteResult::from_cases("Smith normal form properties", results)
}

/// Every suite, with `cases` randomized cases each (at least 100 twist cases).
pub fn run_all(seed: u64, cases: usize) -> Vec<SuiteResult> {
    vec![
        lantern(),
        braid_relations(6),
        commutation(5),
        twist_inverses(seed, cases.max(100)),
        kirby_invariance(seed, cases),
        palf_oracle(seed, cases),
        snf_properties(seed, cases),
    ]
}
