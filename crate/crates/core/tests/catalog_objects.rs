//! Catalog objects against independently computed invariants.

use plugpalf::catalog::{self, Catalog, CatalogError, PlugParams};
use plugpalf::curves::StandardCurve;
use plugpalf::formats::{self, ConstraintsDoc};
use plugpalf::forms::{self, IntSymForm};
use plugpalf::kirby;

fn curves(list: &[&str]) -> Vec<StandardCurve> {
    list.iter().map(|s| s.parse().unwrap()).collect()
}

#[test]
fn w_family_profile_over_the_grid() {
    for m in catalog::GRID_M {
        for n in catalog::GRID_N {
            let p = PlugParams::new(m, n).unwrap();
            let palf = catalog::plug_palf(p).unwrap();
            assert_eq!(palf.cycles().len(), 2 * n + m);
            assert_eq!(palf.holes(), 2 * n + m - 1);
            let inv = palf.invariants();
            assert_eq!((inv.chi, inv.b2), (2, 1), "{p}");
            assert!(inv.h1.is_trivial());
            assert_eq!(inv.form.gram()[(0, 0)], -((m * n * n + 2 * n) as i64));
            let md = Catalog::embedded().plug_diagram(p).unwrap();
            catalog::check_w(p, &palf, &md).unwrap();
        }
    }
}

#[test]
fn w12_has_the_five_cycles_found_by_search() {
    let c = formats::parse_constraints(&Catalog::embedded().text("constraints/W_1_2.constraints").unwrap()).unwrap();
    let found = catalog::search_curve_family(&c);
    let w = catalog::plug_palf(PlugParams::new(1, 2).unwrap()).unwrap();
    assert!(found.contains(&w));
    assert_eq!(w.cycles(), curves(&["{1}", "{1,2}", "{1,3}", "{1,4}", "{1,2,3,4}"]).as_slice());
}

#[test]
fn parameter_and_data_errors() {
    assert!(matches!(PlugParams::new(0, 2), Err(CatalogError::Params(_))));
    assert!(matches!(PlugParams::new(2, 1), Err(CatalogError::Params(_))));
    assert!(matches!(catalog::plug_palf(PlugParams::new(1, 7).unwrap()), Err(CatalogError::MissingData(_))));
}

#[test]
fn manifolds_a_and_b() {
    let (a, am) = catalog::manifold_a().unwrap();
    let (b, bm) = catalog::manifold_b().unwrap();
    let w = catalog::plug_palf(PlugParams::new(1, 2).unwrap()).unwrap();
    assert_eq!(a, w.attach_lefschetz_handle(catalog::beta()).unwrap());
    assert_eq!(b, w.attach_lefschetz_handle(catalog::gamma()).unwrap());
    let fa = IntSymForm::from_rows(vec![vec![-8, 1], vec![1, -2]]).unwrap();
    let fb = IntSymForm::from_rows(vec![vec![-8, -3], vec![-3, -3]]).unwrap();
    for (p, md, f, script) in [(&a, &am, &fa, "reduce_A"), (&b, &bm, &fb, "reduce_B")] {
        let inv = p.invariants();
        assert_eq!((inv.chi, inv.b2), (3, 2));
        assert!(inv.h1.is_trivial());
        assert!(forms::congruent(&inv.form, f, 5).is_yes());
        let run = kirby::run_script(md.diagram(), &Catalog::embedded().script(script).unwrap()).unwrap();
        assert_eq!(run.result.dotted(), 0);
        assert_eq!(run.result.handles(), 2);
        assert_eq!(&run.result.intersection_form().unwrap(), f);
        assert_eq!(catalog::palf_boundary_h1(p).to_string(), "Z/15");
        assert_eq!(md.diagram().invariants().unwrap().boundary_h1.to_string(), "Z/15");
    }
}

#[test]
fn plug_twist_relates_a_and_b() {
    let (_, am) = catalog::manifold_a().unwrap();
    let (_, bm) = catalog::manifold_b().unwrap();
    let twisted = catalog::plug_twist(&am).unwrap();
    assert_eq!(twisted, bm);
    assert_eq!(catalog::plug_twist(&twisted).unwrap(), am);
    assert_eq!(twisted.diagram().euler_characteristic(), am.diagram().euler_characteristic());
}

#[test]
fn search_examples() {
    let mut c = ConstraintsDoc::new(2, 3);
    c.h1 = Some("0".into());
    c.b2 = Some(1);
    c.form = Some(vec![vec![-3]]);
    let found = catalog::search_curve_family(&c);
    assert!(found.iter().any(|p| p.cycles() == curves(&["{1}", "{2}", "{1,2}"]).as_slice()));
    // deterministic order
    assert_eq!(found, catalog::search_curve_family(&c));

    let mut a = ConstraintsDoc::new(4, 6);
    a.h1 = Some("0".into());
    a.b2 = Some(2);
    a.form = Some(vec![vec![-8, 1], vec![1, -2]]);
    a.multiplicity = 2;
    a.limit = Some(3);
    assert!(!catalog::search_curve_family(&a).is_empty());

    let mut contradictory = ConstraintsDoc::new(2, 2);
    contradictory.b2 = Some(3);
    assert!(catalog::search_curve_family(&contradictory).is_empty());
}

#[test]
fn corrupted_file_is_named() {
    let dir = std::env::temp_dir().join(format!("plugpalf-corrupt-{}", std::process::id()));
    catalog::export_to(&dir).unwrap();
    std::fs::write(dir.join("palf/W_2_3.palf"), "holes 6\ncycle {}\n").unwrap();
    let report = catalog::validate_catalog(&Catalog::from_dir(&dir));
    assert!(!report.pass());
    assert!(report.failures().any(|f| f.detail.contains("W_2_3.palf") && f.detail.contains("empty curve")));
    std::fs::remove_dir_all(&dir).unwrap();
}
