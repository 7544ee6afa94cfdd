use std::collections::BTreeSet;

use num_rational::BigRational;
use proptest::prelude::*;

use weber_core::gf::{make_field, GF2Elt};
use weber_core::hecke::{analyze, commute_check, eigen_sieve, hecke_matrix, HeckeOp};
use weber_core::linalg::rank;
use weber_core::modarith::is_prime;
use weber_core::modpoly::{memo_generate, InvariantLine};
use weber_core::ssgraph::{build_graph, ss_count_formula, ss_j_enumerate, FieldBiPoly};

fn small_primes() -> Vec<u64> {
    (5..110).filter(|&p| is_prime(p)).collect()
}

fn lines() -> Vec<InvariantLine> {
    use InvariantLine::*;
    vec![J, X(1), X(2), X(3), X(24), Y(1), Y(2), T]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn node_and_degree_counts(p in prop::sample::select(small_primes()), line in prop::sample::select(lines()), ell in prop::sample::select(vec![5u32, 7])) {
        prop_assume!(p != ell as u64);
        let f = make_field(p).unwrap();
        let g = build_graph(f, line, ell).unwrap();
        let total: u32 = g.nodes.iter().map(|n| n.1).sum();
        prop_assert_eq!(total as usize, line.cover_degree() as usize * ss_count_formula(p));
        if p % 12 == 1 {
            prop_assert!(g.nodes.iter().all(|n| n.1 == 1));
        }
        prop_assert!(g.out_degrees().iter().all(|&d| d == g.degree));
        let h = hecke_matrix(&g);
        prop_assert!(h.eisenstein_left());
        if line == InvariantLine::J && p % 12 == 1 {
            let m = &h.matrix;
            let symmetric = m.iter().enumerate().all(|(i, row)| row.iter().enumerate().all(|(j, &x)| x == m[j][i]));
            prop_assert!(symmetric);
        }
    }

    #[test]
    fn hecke_systems_are_independent(p in prop::sample::select(vec![37u64, 61, 73, 97, 109]), line in prop::sample::select(vec![InvariantLine::J, InvariantLine::X(1), InvariantLine::X(3), InvariantLine::Y(1)])) {
        let f = make_field(p).unwrap();
        let graphs: Vec<_> = [5u32, 7].iter().map(|&l| build_graph(f, line, l).unwrap()).collect();
        let ops: Vec<HeckeOp> = graphs.iter().map(hecke_matrix).collect();
        prop_assert!(commute_check(&ops[0], &ops[1]).unwrap());
        let systems = eigen_sieve(&ops, false).unwrap();
        let n = ops[0].dim();
        let dims: usize = systems.iter().map(|s| s.dim).sum();
        prop_assert!(dims <= n);
        let distinct: BTreeSet<_> = systems.iter().map(|s| s.eigenvalues.clone()).collect();
        prop_assert_eq!(distinct.len(), systems.len());
        let all: Vec<Vec<BigRational>> = systems.iter().flat_map(|s| s.basis.clone()).collect();
        prop_assert_eq!(rank(&all), dims);
        prop_assert!(systems.iter().any(|s| s.is_eisenstein()));
        let rep = analyze(&graphs).unwrap();
        prop_assert!(rep.consistent());
    }
}

#[test]
fn x24_edges_map_to_classical_edges() {
    let f = make_field(13).unwrap();
    let g = build_graph(f, InvariantLine::X(24), 5).unwrap();
    let classical = FieldBiPoly::from_bipoly(f, &memo_generate(InvariantLine::J, 5).unwrap()).unwrap();
    let sixteen = f.from_i64(16);
    let j_of = |u: GF2Elt| {
        let w = u.pow(24);
        let c = w - sixteen;
        c * c * c / w
    };
    let js: BTreeSet<GF2Elt> = ss_j_enumerate(f).unwrap().into_iter().collect();
    assert!(!g.edges.is_empty());
    for &(s, d, _) in &g.edges {
        let (a, b) = (j_of(g.nodes[s].0), j_of(g.nodes[d].0));
        assert!(js.contains(&a) && js.contains(&b));
        assert!(classical.eval(a, b).is_zero());
    }
}

#[test]
fn commuting_on_small_lines() {
    for p in [37u64, 61, 73] {
        let f = make_field(p).unwrap();
        for line in [InvariantLine::X(1), InvariantLine::X(3), InvariantLine::Y(1)] {
            let ops: Vec<HeckeOp> = [5u32, 7, 13].iter().map(|&l| hecke_matrix(&build_graph(f, line, l).unwrap())).collect();
            for i in 0..3 {
                for j in i + 1..3 {
                    assert!(commute_check(&ops[i], &ops[j]).unwrap(), "p={p} {} {i} {j}", line.name());
                }
            }
        }
    }
}
