use canonstrip::hilbert::HilbertData;
use canonstrip::ratpoly::{int, rat};
use canonstrip::root_system::{MarkedSystem, Series, SimpleType};
use canonstrip::varieties::{
    complete_intersection, complete_intersection_from, double_cover, section_step, StepKind,
};
use canonstrip::verify::{strip_report, Hypothesis, Status};
use proptest::prelude::*;

fn ms(s: Series, rank: usize, node: usize) -> MarkedSystem {
    MarkedSystem::build(SimpleType::new(s, rank).unwrap(), node).unwrap()
}

fn bases() -> Vec<MarkedSystem> {
    vec![
        ms(Series::A, 4, 1),
        ms(Series::A, 4, 2),
        ms(Series::B, 3, 1),
        ms(Series::C, 3, 1),
        ms(Series::C, 3, 3),
        ms(Series::D, 5, 5),
        ms(Series::G, 2, 1),
        ms(Series::E, 6, 1),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn degree_order_is_irrelevant(which in 0usize..8, mut degrees in prop::collection::vec(1i64..=4, 1..=3)) {
        let m = &bases()[which];
        let a = complete_intersection(m, &degrees).unwrap();
        degrees.reverse();
        let b = complete_intersection(m, &degrees).unwrap();
        degrees.rotate_left(1);
        let c = complete_intersection(m, &degrees).unwrap();
        prop_assert_eq!(a.polynomial(), b.polynomial());
        prop_assert_eq!(a.polynomial(), c.polynomial());
    }

    #[test]
    fn section_step_reconstructs_and_keeps_b(which in 0usize..8, d in 1i64..=6) {
        let base = HilbertData::for_gp(&bases()[which]).unwrap();
        let z = section_step(&base, d, StepKind::Intersection).unwrap();
        let h = base.polynomial();
        prop_assert_eq!(z.polynomial(), &h - &h.shift(&int(-d)));
        for (tz, ty) in z.levels.iter().zip(&base.levels) {
            if !tz.is_empty() {
                prop_assert_eq!(&tz.b, &ty.b);
            }
        }
        // H(-ι - z) = (-1)^dim H(z)
        let p = z.polynomial();
        let m = p.compose_affine(&int(-1), &int(-z.index)).unwrap();
        prop_assert_eq!(if z.dim % 2 == 0 { m } else { -m }, p);
    }
}

#[test]
fn cominuscule_roots_are_minus_j_over_index() {
    for t in SimpleType::enumerate(7) {
        for node in 1..=t.rank {
            let m = MarkedSystem::build(t, node).unwrap();
            if !m.is_cominuscule() {
                continue;
            }
            assert_eq!(
                int(m.dim() as i64),
                m.omega0_norm() * int(m.index),
                "{}",
                m.label()
            );
            let hd = HilbertData::for_gp(&m).unwrap();
            let sr = strip_report(&hd).unwrap();
            // -j/ι when simply laced; odd quadrics and Lagrangian
            // Grassmannians only reach -j/2ι
            let step = if m.rs.is_simply_laced() { 1 } else { 2 };
            for (r, _) in &sr.rational_roots {
                let j = -r * int(step * m.index);
                assert!(
                    j.is_integer() && j >= int(1) && j < int(step * m.index),
                    "{}: {r}",
                    m.label()
                );
            }
        }
    }
}

#[test]
fn sections_of_e6_run_through_all_classes() {
    let m = ms(Series::E, 6, 4);
    let base = HilbertData::for_gp(&m).unwrap();
    for d in [1, 3, 7, 9] {
        let z = complete_intersection_from(&base, &[d]).unwrap();
        let sr = strip_report(&z).unwrap();
        assert!(sr.expected_holds(), "{}", z.description);
    }
    let cy = complete_intersection(&m, &[7]).unwrap();
    assert_eq!(cy.index, 0);
    let sr = strip_report(&cy).unwrap();
    assert_eq!(sr.verdicts[&Hypothesis::CL].status, Status::Holds);
}

#[test]
fn covers_of_projective_space() {
    for n in 1..=5usize {
        let m = ms(Series::A, n, 1);
        for d in 1..=m.index {
            let y = double_cover(&m, d).unwrap();
            assert_eq!(y.index, m.index - d);
            // χ(O_Y) = 1 + binom(n - d, n): 1 below the index, 1 + (-1)^n at it
            let chi = if d <= n as i64 {
                1
            } else {
                1 + (-1i64).pow(n as u32)
            };
            assert_eq!(
                y.polynomial().eval(&rat(0, 1)),
                int(chi),
                "{}",
                y.description
            );
            assert!(
                strip_report(&y).unwrap().expected_holds(),
                "{}",
                y.description
            );
        }
    }
}

#[test]
fn approximations_agree_with_exact_verdicts() {
    use canonstrip::ratpoly::to_f64;
    use canonstrip::verify::{approx_roots, check_line};
    use canonstrip::Variable;

    let hd = HilbertData::for_gp(&ms(Series::E, 6, 4)).unwrap();
    let p = hd.expand(Variable::Anticanonical).unwrap();
    let exact = strip_report(&hd).unwrap().rational_roots;
    let approx = approx_roots(&p, 12).unwrap();
    assert_eq!(approx.iter().map(|r| r.mult).sum::<u32>(), 29);
    for r in &approx {
        assert!(r.im.abs() < 1e-8);
        assert!(
            exact.iter().any(|(q, _)| (to_f64(q) - r.re).abs() < 1e-8),
            "{}",
            r.re
        );
    }

    for (m, degrees) in [
        (ms(Series::A, 4, 1), vec![5]),
        (ms(Series::A, 4, 1), vec![2, 2]),
        (ms(Series::A, 3, 1), vec![5]),
    ] {
        let y = complete_intersection(&m, &degrees).unwrap();
        let q = y.polynomial();
        let lc = check_line(&q).unwrap();
        let c = to_f64(lc.center.as_ref().unwrap());
        let near = approx_roots(&q, 10)
            .unwrap()
            .iter()
            .all(|r| (r.re - c).abs() < 1e-6);
        assert_eq!(near, lc.on_line, "{}", y.description);
    }
}
