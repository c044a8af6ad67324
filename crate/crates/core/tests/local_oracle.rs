use nambu_core::local::{
    invariants, jacobian_ideal, quotient_dimension, relative_jacobian_ideal, LocalIdeal,
};
use nambu_core::poly::{parse_polynomial, qf, Monomial, Polynomial, Q};
use nambu_core::quasihomog::{find_weights, saito_cross_check};
use num_traits::Zero;
use proptest::prelude::*;

/// `dim O/(I + m^N)` by plain elimination on the span of `m·g` for every
/// monomial `m` and generator `g`, everything cut at total degree `N`.
fn jet_quotient_dim(ideal: &LocalIdeal, order: u32) -> usize {
    let nv = ideal.nvars();
    let monos: Vec<Monomial> = (0..order)
        .flat_map(|d| Monomial::all_of_degree(nv, d))
        .collect();
    let index = |m: &Monomial| monos.iter().position(|x| x == m);
    let mut rows: Vec<Vec<Q>> = Vec::new();
    for g in ideal.generators() {
        for m in &monos {
            let mut row = vec![Q::zero(); monos.len()];
            for (gm, c) in g.terms() {
                if let Some(i) = index(&gm.mul(m)) {
                    row[i] += c;
                }
            }
            rows.push(row);
        }
    }
    monos.len() - rank(rows)
}

fn rank(mut rows: Vec<Vec<Q>>) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for col in 0..ncols {
        let Some(pivot) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, pivot);
        let lead = rows[r][col].clone();
        let pivot_row: Vec<Q> = rows[r].iter().map(|v| v / &lead).collect();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[col].is_zero() {
                let factor = row[col].clone();
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v -= &factor * pv;
                }
            }
        }
        rows[r] = pivot_row;
        r += 1;
    }
    r
}

fn p(s: &str, n: usize) -> Polynomial {
    parse_polynomial(s, n).unwrap()
}

#[test]
fn standard_basis_dimensions_match_the_jet_oracle() {
    let cases = [
        ("x + y^2", 1),
        ("x + y^4", 1),
        ("x^3 + y^2", 1),
        ("x*y + y^3", 1),
        ("x^2 + y^3", 1),
        ("x^3 + y^4 + x^2*y^2", 1),
        ("x^5 + x^2*y^2 + y^5", 1),
        ("x^2 + y1^3 + y2^2", 2),
    ];
    for (f, n) in cases {
        let fp = p(f, n);
        for ideal in [relative_jacobian_ideal(&fp), jacobian_ideal(&fp)] {
            let exact = quotient_dimension(&ideal).dim().unwrap();
            let at = |order| jet_quotient_dim(&ideal, order);
            // stable once m^N lies in the ideal
            let order = (exact as u32 + 1).max(3);
            assert_eq!(at(order), exact, "{f} order {order}");
            assert_eq!(at(order + 1), exact, "{f} order {}", order + 1);
        }
    }
}

#[test]
fn tjurina_number_matches_the_jet_oracle() {
    let fp = p("x^5 + x^2*y^2 + y^5", 1);
    let inv = invariants(&fp).unwrap();
    let ideal = relative_jacobian_ideal(&fp).with_generator(fp.clone());
    assert_eq!(jet_quotient_dim(&ideal, 10), inv.tau_sigma);
    assert!(inv.q_sigma > 0);
}

/// Simple germs with terms of higher weight added; all invariants are
/// determined by the leading part.
fn perturbed() -> impl Strategy<Value = (String, usize, Polynomial)> {
    let types = prop::sample::select(vec![
        ("x + y^3", 2usize, (1i64, 3i64)),
        ("x^3 + y^2", 3, (3, 2)),
        ("x*y + y^4", 4, (3, 4)),
        ("x^2 + y^3", 4, (2, 3)),
    ]);
    (
        types,
        prop::collection::vec((0u32..5, 0u32..6, -3i64..=3), 0..4),
    )
        .prop_map(|((f, mu, (a, b)), extra)| {
            // weights 1/a for x and 1/b for y; keep only terms of weight > 1
            let mut poly = p(f, 1);
            for (i, j, c) in extra {
                if c != 0 && (i as i64) * b + (j as i64) * a > a * b {
                    poly.add_term(Monomial::new(vec![i, j]), qf(c, 1));
                }
            }
            (f.to_string(), mu, poly)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn invariants_are_additive_and_bounded((_name, mu, f) in perturbed()) {
        let inv = invariants(&f).unwrap();
        prop_assert_eq!(inv.mu_sigma, mu);
        prop_assert_eq!(inv.mu_sigma, inv.mu_f + inv.mu_f_restricted);
        prop_assert!(inv.tau_sigma <= inv.mu_sigma);
        prop_assert!(inv.tau_f <= inv.mu_f);
        prop_assert_eq!(inv.q_sigma, inv.mu_sigma - inv.tau_sigma);
        // simple germs are quasihomogeneous after a coordinate change
        prop_assert_eq!(inv.q_sigma, 0);
    }

    #[test]
    fn euler_identity_for_found_weights(a in 2i64..6, b in 2i64..6, coeffs in prop::collection::vec(-3i64..=3, 12)) {
        // all monomials of weight exactly one for weights (1/a, 1/b)
        let mut f = Polynomial::zero(2);
        let mut k = 0;
        for i in 0..=a {
            for j in 0..=b {
                if i * b + j * a == a * b {
                    f.add_term(Monomial::new(vec![i as u32, j as u32]), qf(coeffs[k % 12], 1));
                    k += 1;
                }
            }
        }
        prop_assume!(!f.is_zero());
        if let Some(w) = find_weights(&f) {
            prop_assert!(w.euler_identity_holds(&f));
            if let Ok(check) = saito_cross_check(&f) {
                prop_assert_eq!(check.q_sigma, 0);
                prop_assert!(check.agree);
            }
        }
    }
}
