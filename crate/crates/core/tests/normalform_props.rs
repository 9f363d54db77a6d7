use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use zxel::gadgets::{row_addition, seq};
use zxel::normalform::{
    nf_from_vector, nf_self_plug, nf_tensor, nf_to_diagram, normalize, subset_for_row, NormalForm,
};
use zxel::semantics::{contract_state, interpret, DEFAULT_WIRE_CAP};
use zxel::testing::random_diagram;
use zxel::C64;

fn random_vector(rng: &mut StdRng, m: usize) -> Vec<C64> {
    (0..1usize << m)
        .map(|_| C64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)))
        .collect()
}

fn max_diff(a: &[C64], b: &[C64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Cup-contraction oracle: sums over the two plugged wires carrying equal bits.
fn plug_oracle(v: &[C64], m: usize, p: usize, q: usize) -> Vec<C64> {
    let mut out = vec![C64::new(0.0, 0.0); 1 << (m - 2)];
    for (k, c) in v.iter().enumerate() {
        let bit = |pos: usize| (k >> (m - 1 - pos)) & 1;
        if bit(p) != bit(q) {
            continue;
        }
        let mut r = 0;
        for pos in (0..m).filter(|&x| x != p && x != q) {
            r = (r << 1) | bit(pos);
        }
        out[r] += c;
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn vector_round_trip(seed in any::<u64>(), m in 0usize..=4) {
        let mut rng = StdRng::seed_from_u64(seed);
        let v = random_vector(&mut rng, m);
        let nf = nf_from_vector(&v).unwrap();
        let back = contract_state(&nf_to_diagram(&nf), DEFAULT_WIRE_CAP).unwrap();
        prop_assert!(max_diff(&back, &v) < 1e-9);
    }

    #[test]
    fn tensor_matches_products(seed in any::<u64>(), m in 0usize..=3, n in 0usize..=3) {
        let mut rng = StdRng::seed_from_u64(seed);
        let (a, b) = (random_vector(&mut rng, m), random_vector(&mut rng, n));
        let t = nf_tensor(&nf_from_vector(&a).unwrap(), &nf_from_vector(&b).unwrap());
        let want: Vec<C64> = a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect();
        prop_assert_eq!(t.m, m + n);
        prop_assert!(max_diff(&t.coeffs, &want) < 1e-12);
    }

    #[test]
    fn self_plug_matches_cup_oracle(seed in any::<u64>(), m in 2usize..=5) {
        let mut rng = StdRng::seed_from_u64(seed);
        let v = random_vector(&mut rng, m);
        let p = rng.gen_range(0..m);
        let q = (p + rng.gen_range(1..m)) % m;
        let got = nf_self_plug(&nf_from_vector(&v).unwrap(), p, q).unwrap();
        prop_assert!(max_diff(&got.coeffs, &plug_oracle(&v, m, p, q)) < 1e-12);
    }

    #[test]
    fn normal_form_is_the_bent_matrix(seed in any::<u64>()) {
        let d = random_diagram(&mut StdRng::seed_from_u64(seed), 3, 8);
        let (n, m) = (d.n_inputs(), d.n_outputs());
        let mat = interpret(&d).unwrap();
        // input i sits at state position n-1-i, ahead of the outputs
        let mut want = vec![C64::new(0.0, 0.0); 1 << (n + m)];
        for col in 0..1usize << n {
            let rev = (0..n).fold(0, |acc, i| (acc << 1) | ((col >> i) & 1));
            for row in 0..1usize << m {
                want[(rev << m) | row] = mat.get(row, col);
            }
        }
        let nf: NormalForm = normalize(&d).unwrap();
        prop_assert_eq!(nf.m, n + m);
        prop_assert!(max_diff(&nf.coeffs, &want) < 1e-9);
    }

    #[test]
    fn row_additions_commute(seed in any::<u64>(), m in 1usize..=3) {
        let mut rng = StdRng::seed_from_u64(seed);
        let last = (1usize << m) - 1;
        let j1 = rng.gen_range(0..last);
        let j2 = rng.gen_range(0..last);
        let (a, b) = (C64::new(rng.gen_range(-2.0..2.0), 1.0), C64::new(0.5, rng.gen_range(-2.0..2.0)));
        let x = row_addition(m, a, &subset_for_row(m, j1));
        let y = row_addition(m, b, &subset_for_row(m, j2));
        let xy = interpret(&seq(&[x.clone(), y.clone()])).unwrap();
        let yx = interpret(&seq(&[y, x])).unwrap();
        prop_assert!(xy.max_abs_diff(&yx).unwrap() < 1e-9);
    }
}

#[test]
fn right_most_plug_formulas() {
    let a: Vec<C64> = (0..4)
        .map(|k| C64::new(k as f64 + 1.0, -(k as f64)))
        .collect();
    let c = nf_self_plug(&nf_from_vector(&a).unwrap(), 0, 1).unwrap();
    assert_eq!(c.coeffs, vec![a[0] + a[3]]);
    let a: Vec<C64> = (0..8).map(|k| C64::new(k as f64, 0.5 * k as f64)).collect();
    let b = nf_self_plug(&nf_from_vector(&a).unwrap(), 1, 2).unwrap();
    assert_eq!(b.coeffs, vec![a[0] + a[3], a[4] + a[7]]);
}
