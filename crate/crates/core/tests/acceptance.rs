//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::time::{Duration, Instant};

use plugpalf::catalog::{self, Catalog, PlugParams};
use plugpalf::forms::{self, Congruence, IntSymForm, LinkingIso, Obstruction};
use plugpalf::kirby;
use plugpalf::report;
use plugpalf::selftest;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn form(rows: &[&[i64]]) -> IntSymForm {
    IntSymForm::from_rows(rows.iter().map(|r| r.to_vec()).collect()).expect("symmetric")
}

fn target_a() -> IntSymForm {
    form(&[&[-8, 1], &[1, -2]])
}

fn target_b() -> IntSymForm {
    form(&[&[-8, -3], &[-3, -3]])
}

fn reduced(name: &str) -> Result<IntSymForm, String> {
    let cat = Catalog::embedded();
    let md = match name {
        "A" => cat.manifold_a(),
        _ => cat.manifold_b(),
    }
    .map_err(|e| e.to_string())?
    .1;
    let script = cat.script(&format!("reduce_{name}")).map_err(|e| e.to_string())?;
    let run = kirby::run_script(md.diagram(), &script).map_err(|e| e.to_string())?;
    run.result.intersection_form().map_err(|e| e.to_string())
}

fn intersection_matrices() -> Outcome {
    let start = Instant::now();
    for (name, target) in [("A", target_a()), ("B", target_b())] {
        let f = reduced(name)?;
        let c = forms::congruent(&f, &target, 5);
        ensure(c.is_yes(), format!("{name}: {f} vs {target}: {c}"))?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(1), format!("took {elapsed:?}"))?;
    Ok(format!("A, B reduce to the expected forms with bound-5 witnesses in {elapsed:?}"))
}

fn parity_verdict() -> Outcome {
    let c = forms::congruent(&target_a(), &target_b(), 5);
    ensure(c == Congruence::No { invariant: Obstruction::Parity }, format!("verdict {c}"))?;
    let r = report::verify_theorem2(&Catalog::embedded());
    ensure(r.items.len() == 6 && r.items[4].pass, "theorem 2 item 5 failed")?;
    Ok(format!("congruent -> {c}; item 5 passes"))
}

fn betti_numbers() -> Outcome {
    for (name, (p, md)) in [("A", catalog::manifold_a()), ("B", catalog::manifold_b())]
        .into_iter()
        .map(|(n, r)| r.map(|x| (n, x)).map_err(|e| e.to_string()))
        .collect::<Result<Vec<_>, _>>()?
    {
        let pi = p.invariants();
        let ki = md.diagram().invariants().map_err(|e| e.to_string())?;
        ensure(pi.b2 == 2 && ki.b2 == 2, format!("{name}: b2 {} / {}", pi.b2, ki.b2))?;
        ensure(pi.h1.is_trivial() && ki.h1.is_trivial(), format!("{name}: H1 {} / {}", pi.h1, ki.h1))?;
        // H2 of a 2-handlebody is the kernel lattice, free of rank b2
        ensure(pi.form.rank() == 2 && ki.form.rank() == 2, format!("{name}: H2 rank"))?;
    }
    Ok("b2 = 2, H1 = 0, H2 = Z^2 for A and B from PALF and Kirby".into())
}

fn boundary_agreement() -> Outcome {
    let (ap, am) = catalog::manifold_a().map_err(|e| e.to_string())?;
    let (bp, bm) = catalog::manifold_b().map_err(|e| e.to_string())?;
    for (name, p, md) in [("A", &ap, &am), ("B", &bp, &bm)] {
        let k = md.diagram().invariants().map_err(|e| e.to_string())?.boundary_h1.to_string();
        let q = catalog::palf_boundary_h1(p).to_string();
        ensure(k == "Z/15" && q == "Z/15", format!("{name}: {k} / {q}"))?;
    }
    let la = forms::linking_form(&target_a()).map_err(|e| e.to_string())?;
    let lb = forms::linking_form(&target_b()).map_err(|e| e.to_string())?;
    let (ma, mb) = (la.value_multiset(1 << 16), lb.value_multiset(1 << 16));
    ensure(ma.is_some() && ma == mb, "linking value multisets differ")?;
    ensure(forms::linking_forms_isomorphic(&la, &lb) == LinkingIso::Isomorphic, "linking forms not isomorphic")?;
    Ok("boundary H1 = Z/15 on both sides; linking multisets agree (homological check only)".into())
}

fn plug_twist() -> Outcome {
    let (_, am) = catalog::manifold_a().map_err(|e| e.to_string())?;
    let (_, bm) = catalog::manifold_b().map_err(|e| e.to_string())?;
    let t = catalog::plug_twist(&am).map_err(|e| e.to_string())?;
    ensure(t == bm, "twist of A differs from B")?;
    ensure(catalog::plug_twist(&t).map_err(|e| e.to_string())? == am, "twist is not an involution")?;
    ensure(catalog::plug_twist(&bm).map_err(|e| e.to_string())? == am, "twist of B differs from A")?;
    Ok("twist(A) = B and twist(twist(A)) = A".into())
}

fn theorem1_sweep() -> Outcome {
    let start = Instant::now();
    let cat = Catalog::embedded();
    let mut count = 0;
    for m in 1..=4 {
        for n in 2..=5 {
            let p = PlugParams::new(m, n).map_err(|e| e.to_string())?;
            let palf = catalog::plug_palf(p).map_err(|e| e.to_string())?;
            ensure(palf.cycles().len() == 2 * n + m && palf.is_allowable(), format!("{p}: cycles"))?;
            let pi = palf.invariants();
            ensure(pi.chi == 2 && pi.h1.is_trivial() && pi.b2 == 1, format!("{p}: chi {} H1 {} b2 {}", pi.chi, pi.h1, pi.b2))?;
            ensure(pi.form.is_negative_definite(), format!("{p}: form {} not negative definite", pi.form))?;
            let ki = palf.to_kirby().invariants().map_err(|e| e.to_string())?;
            ensure(
                ki.chi == pi.chi && ki.h1 == pi.h1 && ki.b2 == pi.b2 && forms::congruent(&ki.form, &pi.form, 5).is_yes(),
                format!("{p}: PALF and Kirby invariants differ"),
            )?;
            ensure(ki.boundary_h1 == catalog::palf_boundary_h1(&palf), format!("{p}: boundary differs"))?;
            let md = cat.plug_diagram(p).map_err(|e| e.to_string())?;
            catalog::check_w(p, &palf, &md).map_err(|e| format!("{p}: {e}"))?;
            let r = report::verify_theorem1(&cat, p).map_err(|e| e.to_string())?;
            ensure(r.pass, format!("{p}: verify-theorem1 failed"))?;
            count += 1;
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(10), format!("took {elapsed:?}"))?;
    Ok(format!("{count} parameter pairs consistent in {elapsed:?}"))
}

fn relation_suite() -> Outcome {
    let suites = [selftest::lantern(), selftest::braid_relations(5), selftest::commutation(5), selftest::twist_inverses(0, 100)];
    for s in &suites {
        ensure(s.pass(), format!("{}: {:?}", s.name, s.failures.first()))?;
    }
    ensure(suites[3].cases == 100, "twist inverse count")?;
    Ok(suites.iter().map(|s| format!("{} ({})", s.name, s.cases)).collect::<Vec<_>>().join(", "))
}

fn kirby_invariance() -> Outcome {
    let s = selftest::kirby_invariance(0, 1000);
    ensure(s.cases == 1000 && s.pass(), format!("{} failures, first {:?}", s.failures.len(), s.failures.first()))?;
    Ok("1000 random diagrams, move sequences up to 10, no invariant drift".into())
}

fn oracle_equivalence() -> Outcome {
    let s = selftest::palf_oracle(0, 500);
    ensure(s.cases == 500 && s.pass(), format!("{} failures, first {:?}", s.failures.len(), s.failures.first()))?;
    Ok("500 random PALFs: kernel restriction agrees with the Kirby translation".into())
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("intersection matrices", intersection_matrices),
        ("parity verdict", parity_verdict),
        ("betti numbers and homology", betti_numbers),
        ("boundary agreement", boundary_agreement),
        ("plug twist", plug_twist),
        ("W(m,n) sweep", theorem1_sweep),
        ("mapping-class relations", relation_suite),
        ("kirby-move invariance", kirby_invariance),
        ("PALF/Kirby oracle", oracle_equivalence),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
