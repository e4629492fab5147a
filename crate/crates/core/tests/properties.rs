use hiersurf::experiments::{l_min, parse_grid};
use hiersurf::matching::{matching_weight, min_weight_perfect_matching};
use hiersurf::pauli::{Clifford, Pauli, PauliFrame};
use proptest::prelude::*;

fn pauli() -> impl Strategy<Value = Pauli> {
    (0usize..4).prop_map(Pauli::from_index)
}

fn frame(len: usize) -> impl Strategy<Value = PauliFrame> {
    proptest::collection::vec(pauli(), len).prop_map(move |ps| {
        let mut f = PauliFrame::new(len);
        for (q, p) in ps.into_iter().enumerate() {
            f.apply(q, p).unwrap();
        }
        f
    })
}

proptest! {
    #[test]
    fn pauli_products(a in pauli(), b in pauli(), c in pauli()) {
        prop_assert_eq!(a.mul(a), Pauli::I);
        prop_assert_eq!(a.mul(b).mul(c), a.mul(b.mul(c)));
        prop_assert_eq!(a.anticommutes(b), b.anticommutes(a));
        // anticommutation is additive over products
        prop_assert_eq!(a.mul(b).anticommutes(c), a.anticommutes(c) ^ b.anticommutes(c));
    }

    #[test]
    fn cliffords_are_involutions(f in frame(70), q in 0usize..70, t in 0usize..70) {
        prop_assume!(q != t);
        for g in [Clifford::H(q), Clifford::Cnot { control: q, target: t }] {
            let mut g2 = f.clone();
            g2.propagate(g).unwrap();
            g2.propagate(g).unwrap();
            prop_assert_eq!(&g2, &f);
        }
    }

    #[test]
    fn conjugation_preserves_commutation(f in frame(4), g in frame(4)) {
        let comm = |a: &PauliFrame, b: &PauliFrame| {
            (0..4).filter(|&q| a.get(q).unwrap().anticommutes(b.get(q).unwrap())).count() % 2
        };
        let before = comm(&f, &g);
        let (mut f2, mut g2) = (f.clone(), g.clone());
        for gate in [Clifford::Cnot { control: 0, target: 2 }, Clifford::H(1), Clifford::Cnot { control: 1, target: 3 }] {
            f2.propagate(gate).unwrap();
            g2.propagate(gate).unwrap();
        }
        prop_assert_eq!(comm(&f2, &g2), before);
    }

    #[test]
    fn grids_stay_in_range(lo in 0.0f64..1.0, span in 0.0f64..1.0, step in 0.001f64..0.5) {
        let hi = lo + span;
        let g = parse_grid(&format!("{lo}:{hi}:{step}")).unwrap();
        prop_assert_eq!(g.len(), (span / step + 1e-9).floor() as usize + 1);
        prop_assert!(g.windows(2).all(|w| w[0] < w[1]));
        prop_assert!(g.iter().all(|&x| x >= lo - 1e-9 && x <= hi + 1e-9));
    }

    #[test]
    fn complete_graphs_match_fully(n2 in 1usize..8, ws in proptest::collection::vec(0i64..1000, 120)) {
        let n = 2 * n2;
        let mut edges = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                edges.push((a, b, ws[edges.len() % ws.len()]));
            }
        }
        let pairs = min_weight_perfect_matching(n, &edges).unwrap();
        let mut seen = vec![false; n];
        for &(a, b) in &pairs {
            prop_assert!(!seen[a] && !seen[b]);
            seen[a] = true;
            seen[b] = true;
        }
        prop_assert!(seen.iter().all(|&s| s));
        prop_assert!(matching_weight(&edges, &pairs).is_some());
    }

    #[test]
    fn l_min_is_smallest_odd_distance(eps0 in 1e-3f64..1.0, kappa in 0.05f64..3.0, exp in 3i32..15) {
        let target = 10f64.powi(-exp);
        let l = l_min(eps0, kappa, target).unwrap();
        prop_assert!(l % 2 == 1);
        prop_assert!(eps0 * (-kappa * l as f64).exp() <= target * (1.0 + 1e-9));
        if l >= 3 {
            prop_assert!(eps0 * (-kappa * (l - 2) as f64).exp() > target);
        }
    }
}
