//! Randomized invariants of the word, presentation, filling, torus, builder,
//! holonomy and quasimorphism layers.

use num_bigint::BigInt;
use proptest::prelude::*;

use slopelab::constructions::{bmt_conjugate, nonrigid_alpha, separation_combine, separation_commutator, torus_gn};
use slopelab::presentations::{abelianization, homology_class, AbelianGroup, Presentation};
use slopelab::psl2::{evaluate, fig8_holonomy, trace};
use slopelab::quasimorphs::{brooks_count, homogenize_estimate, BrooksSpec};
use slopelab::torusnf::{conjugate_torus, is_trivial_torus, normal_form, reduce};
use slopelab::words::{bmt_word, commutator, conjugate, cyclic_reduce, free_reduce, Alphabet, Generator, Word};
use slopelab::{figure_eight, fill, slope_element, torus_knot, Slope};

fn ab() -> Alphabet {
    Alphabet::new(["a", "b"]).unwrap()
}

fn raw_syllables(names: &'static [&'static str], max: usize) -> impl Strategy<Value = Vec<(Generator, i64)>> {
    prop::collection::vec(
        (0..names.len(), prop_oneof![-3i64..=-1, 1i64..=3]),
        0..max,
    )
    .prop_map(move |v| {
        v.into_iter()
            .map(|(i, e)| (Generator::new(names[i]).unwrap(), e))
            .collect()
    })
}

fn word_over(names: &'static [&'static str], max: usize) -> impl Strategy<Value = Word> {
    raw_syllables(names, max).prop_map(|raw| free_reduce(&raw))
}

fn templates() -> Vec<Presentation> {
    vec![
        figure_eight(),
        torus_knot(2, 3).unwrap(),
        torus_knot(3, 4).unwrap(),
        torus_knot(2, 5).unwrap(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn free_reduce_idempotent_and_shrinking(raw in raw_syllables(&["a", "b"], 12)) {
        let once = free_reduce(&raw);
        prop_assert_eq!(free_reduce(once.syllables()), once.clone());
        let raw_len: u64 = raw.iter().map(|(_, e)| e.unsigned_abs()).sum();
        prop_assert!(once.len() as u64 <= raw_len);
    }

    #[test]
    fn cyclic_reduce_identity(w in word_over(&["a", "b"], 10)) {
        let (core, conj) = cyclic_reduce(&w);
        prop_assert_eq!(conjugate(&core, &conj), w);
        let s = core.syllables();
        if s.len() >= 2 {
            prop_assert_ne!(&s[0].0, &s[s.len() - 1].0);
        }
    }

    #[test]
    fn commutator_inverse(g in word_over(&["a", "b"], 6), h in word_over(&["a", "b"], 6)) {
        prop_assert_eq!(commutator(&g, &h).inverse(), commutator(&h, &g));
    }

    #[test]
    fn bmt_in_normal_closure(v in word_over(&["a", "b"], 5), u in word_over(&["a", "b"], 5)) {
        // Any generator-killing map that kills v also kills w.
        let w = bmt_word(&v, &u);
        for killed in ["a", "b"] {
            let kill = |g: &Generator| if g.name() == killed { Word::identity() } else { Word::generator(g.clone()) };
            if v.substitute(kill).is_identity() {
                prop_assert!(w.substitute(kill).is_identity());
            }
        }
        // Abelian shadow: the exponent sums of w are those of v⁻¹.
        for g in ab().generators() {
            prop_assert_eq!(w.exponent_sum(g), -v.exponent_sum(g));
        }
    }

    #[test]
    fn snf_invariant_under_relator_moves(t in 0usize..4, c in word_over(&["a", "h", "x", "y"], 4), flip in any::<bool>()) {
        let p = &templates()[t];
        let mut moved = p.clone();
        let r = moved.relators[0].clone();
        let names: Vec<&str> = p.alphabet.generators().iter().map(|g| g.name()).collect();
        let cj = c.substitute(|g| if names.contains(&g.name()) { Word::generator(g.clone()) } else { Word::identity() });
        moved.relators[0] = if flip { conjugate(&r, &cj).inverse() } else { conjugate(&r, &cj) };
        moved.relators.reverse();
        prop_assert_eq!(abelianization(&moved), abelianization(p));
    }

    #[test]
    fn filling_homology(t in 0usize..4, p in -20i64..=20, q in 1i64..=5) {
        prop_assume!(num_integer::gcd(p, q) == 1);
        let pres = &templates()[t];
        let r = Slope::new(p, q).unwrap();
        let h = abelianization(&fill(pres, r).unwrap());
        let expected = match p.abs() {
            0 => AbelianGroup { rank: 1, torsion: vec![] },
            1 => AbelianGroup { rank: 0, torsion: vec![] },
            n => AbelianGroup { rank: 0, torsion: vec![BigInt::from(n)] },
        };
        prop_assert_eq!(h, expected);
        prop_assert_eq!(Slope::new(-p, -q).unwrap(), r);
        let class = homology_class(pres, &slope_element(pres, r).unwrap()).unwrap();
        prop_assert_eq!(class.free, vec![BigInt::from(p)]);
    }

    #[test]
    fn torus_normal_form_is_multiplicative(w1 in word_over(&["x", "y"], 8), w2 in word_over(&["x", "y"], 8)) {
        let a = normal_form(2, 3, &w1).unwrap();
        let b = normal_form(2, 3, &w2).unwrap();
        let ab = normal_form(2, 3, &(&w1 * &w2)).unwrap();
        prop_assert_eq!(ab.degree, a.degree + b.degree);
        let joined: Vec<_> = a.syllables.iter().chain(&b.syllables).copied().collect();
        prop_assert_eq!(ab.syllables, reduce(&joined, 2, 3));
    }

    #[test]
    fn torus_triviality_ignores_inserted_relators(w in word_over(&["x", "y"], 8), pos in 0usize..8, sign in any::<bool>()) {
        let t = torus_knot(2, 3).unwrap();
        let r = if sign { t.relators[0].clone() } else { t.relators[0].inverse() };
        let letters: Vec<_> = w.syllables().to_vec();
        let k = pos.min(letters.len());
        let mut raw = letters[..k].to_vec();
        raw.extend_from_slice(r.syllables());
        raw.extend_from_slice(&letters[k..]);
        let inserted = free_reduce(&raw);
        prop_assert_eq!(is_trivial_torus(2, 3, &inserted).unwrap(), is_trivial_torus(2, 3, &w).unwrap());
        prop_assert_eq!(normal_form(2, 3, &inserted).unwrap().syllables, normal_form(2, 3, &w).unwrap().syllables);
    }

    #[test]
    fn torus_conjugacy_is_an_equivalence(
        w in word_over(&["x", "y"], 6),
        c1 in word_over(&["x", "y"], 4),
        c2 in word_over(&["x", "y"], 4),
        other in word_over(&["x", "y"], 6),
    ) {
        let w1 = conjugate(&w, &c1);
        let w2 = conjugate(&w1, &c2);
        prop_assert!(conjugate_torus(2, 3, &w, &w).unwrap());
        prop_assert!(conjugate_torus(2, 3, &w, &w1).unwrap());
        prop_assert!(conjugate_torus(2, 3, &w1, &w).unwrap());
        prop_assert!(conjugate_torus(2, 3, &w, &w2).unwrap());
        prop_assert_eq!(
            conjugate_torus(2, 3, &w, &other).unwrap(),
            conjugate_torus(2, 3, &other, &w1).unwrap()
        );
    }

    #[test]
    fn builders_stay_reduced_and_hereditary(g in word_over(&["a", "h"], 4), alpha in word_over(&["a", "h"], 4), k in 1u32..4) {
        let outs = [
            bmt_conjugate(&g, &alpha),
            separation_commutator(&alpha, &g, &alpha),
            separation_combine(&g, &alpha, k, 1, 2).unwrap(),
            nonrigid_alpha(&g, &alpha, k, 2).unwrap(),
        ];
        for w in &outs {
            prop_assert_eq!(free_reduce(w.syllables()), w.clone());
        }
        // bmt_conjugate(g, α) ∈ ⟨⟨g⟩⟩: killing the letters of g (when that kills g) kills it.
        for killed in ["a", "h"] {
            let kill = |x: &Generator| if x.name() == killed { Word::identity() } else { Word::generator(x.clone()) };
            if g.substitute(kill).is_identity() {
                prop_assert!(outs[0].substitute(kill).is_identity());
            }
            if alpha.substitute(kill).is_identity() {
                prop_assert!(outs[1].substitute(kill).is_identity());
            }
        }
    }

    #[test]
    fn holonomy_is_multiplicative_and_a_class_function(
        w1 in word_over(&["a", "h"], 10),
        w2 in word_over(&["a", "h"], 10),
        c in word_over(&["a", "h"], 5),
    ) {
        let rep = fig8_holonomy();
        let m1 = evaluate(&rep, &w1).unwrap();
        let m2 = evaluate(&rep, &w2).unwrap();
        let m12 = evaluate(&rep, &(&w1 * &w2)).unwrap();
        let scale = 1.0 + [m1, m2].iter().flat_map(|m| [m.a, m.b, m.c, m.d]).map(|z| z.norm()).fold(0.0, f64::max).powi(2);
        prop_assert!(m12.distance(&(m1 * m2)) <= 1e-9 * scale);
        let t = trace(&m1);
        let tc = trace(&evaluate(&rep, &conjugate(&w1, &c)).unwrap());
        prop_assert!((t - tc).norm() <= 1e-9 * scale.max(1.0) * 10.0);
    }

    #[test]
    fn brooks_count_antisymmetric(g in word_over(&["a", "b"], 10), pattern in word_over(&["a", "b"], 3), h in word_over(&["a", "b"], 10)) {
        prop_assume!(!pattern.is_identity());
        let spec = BrooksSpec::new(&ab(), pattern.clone()).unwrap();
        prop_assert_eq!(brooks_count(&spec, &g.inverse()).unwrap(), -brooks_count(&spec, &g).unwrap());
        let d = brooks_count(&spec, &(&g * &h)).unwrap() - brooks_count(&spec, &g).unwrap() - brooks_count(&spec, &h).unwrap();
        prop_assert!(d.unsigned_abs() as usize <= 2 * (pattern.len() + 1));
    }

    #[test]
    fn homogenization_power_law(g in word_over(&["a", "b"], 6), k in 1u32..5, n in 1u32..20) {
        let spec = BrooksSpec::new(&ab(), Word::generator(Generator::new("a").unwrap()) * Word::generator(Generator::new("b").unwrap())).unwrap();
        let lhs = homogenize_estimate(&spec, &g.pow(k as i64), n).unwrap();
        let rhs = k as f64 * homogenize_estimate(&spec, &g, k * n).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-12);
    }

    #[test]
    fn homogenization_conjugation_stable(g in word_over(&["a", "b"], 6), c in word_over(&["a", "b"], 4)) {
        let spec = BrooksSpec::new(&ab(), Word::generator(Generator::new("a").unwrap()) * Word::generator(Generator::new("b").unwrap())).unwrap();
        let n = 64;
        let d = homogenize_estimate(&spec, &g, n).unwrap() - homogenize_estimate(&spec, &conjugate(&g, &c), n).unwrap();
        prop_assert!(d.abs() <= 2.0 * 2.0 * (c.len() as f64 + 1.0) / n as f64);
    }
}

#[test]
fn template_homology() {
    for p in templates() {
        let h = abelianization(&p);
        assert_eq!(h, AbelianGroup { rank: 1, torsion: vec![] }, "{}", p.name);
        let mu = homology_class(&p, p.meridian().unwrap()).unwrap();
        assert_eq!(mu.free.len(), 1);
        assert_eq!(mu.free[0].magnitude(), &1u32.into());
        assert!(homology_class(&p, p.longitude().unwrap()).unwrap().is_zero());
    }
}

#[test]
fn torus_gn_family_pairwise_nonconjugate() {
    let family: Vec<Word> = (1..=6).map(|n| torus_gn(2, 3, n).unwrap()).collect();
    for (i, a) in family.iter().enumerate() {
        for (j, b) in family.iter().enumerate() {
            assert_eq!(conjugate_torus(2, 3, a, b).unwrap(), i == j);
        }
    }
}
