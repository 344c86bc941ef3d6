use std::sync::OnceLock;

use proptest::prelude::*;

use ellconf_core::cohomology::cohomology;
use ellconf_core::equivariance::weight_decomposition;
use ellconf_core::exterior::{apply_derivation, pair_count, substitute, Derivation, Substitution};
use ellconf_core::linalg::SparseVec;
use ellconf_core::partitions::slice_dimension_oracle;
use ellconf_core::perm::Permutation;
use ellconf_core::{IrrepMultiplicities, KrizModel, ModelId, Monomial, MultiVector, Rational};

const N: usize = 4;

fn model() -> &'static KrizModel {
    static MODEL: OnceLock<KrizModel> = OnceLock::new();
    MODEL.get_or_init(|| KrizModel::new(N).unwrap())
}

/// A monomial with `p` letters among x, y and `q` among the pair generators.
fn monomial(n: usize) -> impl Strategy<Value = Monomial> {
    let letters = proptest::sample::subsequence((0..2 * n).collect::<Vec<_>>(), 0..=2 * n);
    let pairs = proptest::sample::subsequence((0..pair_count(n)).collect::<Vec<_>>(), 0..n);
    (letters, pairs).prop_map(move |(l, w)| {
        let bits = l.iter().map(|b| 1u64 << b).sum::<u64>() + w.iter().map(|k| 1u64 << (2 * n + k)).sum::<u64>();
        Monomial(bits)
    })
}

fn coords(v: &MultiVector, p: usize, q: usize) -> SparseVec {
    model().coordinates(v, p, q).unwrap()
}

fn lift(m: Monomial) -> MultiVector {
    MultiVector::monomial(N, m, Rational::one())
}

fn in_range(p: usize, q: usize) -> bool {
    q < N && p <= model().max_p(q)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn normal_form_is_idempotent(m in monomial(N)) {
        let (p, q) = m.bidegree(N);
        prop_assume!(in_range(p, q));
        let c = coords(&lift(m), p, q);
        let back = model().element(p, q, &c);
        prop_assert_eq!(coords(&back, p, q), c);
    }

    #[test]
    fn differential_squares_to_zero(m in monomial(N)) {
        let (p, q) = m.bidegree(N);
        prop_assume!(q >= 2 && in_range(p + 4, q - 2));
        let d = Derivation::differential(N);
        let dd = apply_derivation(&d, &apply_derivation(&d, &lift(m)).unwrap()).unwrap();
        prop_assert!(coords(&dd, p + 4, q - 2).is_zero());
    }

    #[test]
    fn differential_descends_to_quotient(m in monomial(N)) {
        let (p, q) = m.bidegree(N);
        prop_assume!(q >= 1 && in_range(p, q) && in_range(p + 2, q - 1));
        let d = Derivation::differential(N);
        let reduced = model().element(p, q, &coords(&lift(m), p, q));
        let lhs = coords(&apply_derivation(&d, &lift(m)).unwrap(), p + 2, q - 1);
        let rhs = coords(&apply_derivation(&d, &reduced).unwrap(), p + 2, q - 1);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn differential_commutes_with_permutations(m in monomial(N), k in 0usize..24) {
        let (p, q) = m.bidegree(N);
        prop_assume!(q >= 1 && in_range(p + 2, q - 1));
        let sigma = Permutation::all(N).nth(k).unwrap();
        let s = Substitution::permutation(N, &sigma);
        let d = Derivation::differential(N);
        let v = lift(m);
        let lhs = apply_derivation(&d, &substitute(&v, &s).unwrap()).unwrap();
        let rhs = substitute(&apply_derivation(&d, &v).unwrap(), &s).unwrap();
        prop_assert_eq!(coords(&lhs, p + 2, q - 1), coords(&rhs, p + 2, q - 1));
    }

    #[test]
    fn sl2_weights_are_symmetric(slice in 0usize..40) {
        let bidegrees = model().bidegrees();
        let (p, q) = bidegrees[slice % bidegrees.len()];
        let w = weight_decomposition(model(), ModelId::A, p, q).unwrap();
        prop_assert!(w.is_symmetric());
        prop_assert_eq!(w.irrep_multiplicities().unwrap().dim(), model().dim(ModelId::A, p, q).unwrap());
    }

    #[test]
    fn tensor_dimension_is_multiplicative(
        a in proptest::collection::vec((0usize..5, 1usize..4), 1..4),
        b in proptest::collection::vec((0usize..5, 1usize..4), 1..4),
    ) {
        let a = IrrepMultiplicities::from_pairs(a);
        let b = IrrepMultiplicities::from_pairs(b);
        prop_assert_eq!(a.tensor(&b).dim(), a.dim() * b.dim());
        prop_assert_eq!(a.tensor(&b), b.tensor(&a));
    }

    #[test]
    fn marked_partitions_count_basis(n in 1usize..=7, q in 0usize..7, p in 0usize..15) {
        prop_assume!(q < n && p <= 2 * (n - q));
        let model = KrizModel::new(n).unwrap();
        prop_assert_eq!(slice_dimension_oracle(n, p, q).unwrap(), model.formula_dim(ModelId::A, p, q));
    }
}

#[test]
fn euler_characteristic_survives_cohomology() {
    for which in [ModelId::A, ModelId::B, ModelId::UA, ModelId::UB] {
        let mut chi_chain = 0i64;
        for (p, q) in model().bidegrees() {
            let sign = if (p + q) % 2 == 0 { 1 } else { -1 };
            chi_chain += sign * model().dim(which, p, q).unwrap() as i64;
        }
        let chi_h: i64 = cohomology(model(), which)
            .unwrap()
            .iter()
            .map(|(&(p, q), s)| if (p + q) % 2 == 0 { s.dim as i64 } else { -(s.dim as i64) })
            .sum();
        assert_eq!(chi_chain, chi_h, "{}", which.name());
    }
}
