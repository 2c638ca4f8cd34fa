use ordtope::audit::Verdict;
use ordtope::numeric::{gen_primes, required_digits, PrimeSequence};
use ordtope::transforms::{audit_jst_orders, build_jst, jst_lcodes};

#[test]
fn jst_shape_and_ones() {
    for k in 1..=6 {
        for m in 1..=6 {
            let s = build_jst(k, m, 42).unwrap();
            assert_eq!(s.shape(), (k + m, 2 * (k + m)));
            let popcount: usize = s.block().iter().flatten().map(|&b| b as usize).sum();
            assert_eq!(s.ones(), 2 * (k + m) + popcount);
            for (i, row) in s.rows().iter().enumerate() {
                let (left, right) = row.split_at(2 * k);
                if i < k {
                    let pair: Vec<u8> = (0..2 * k).map(|c| (c / 2 == i) as u8).collect();
                    assert_eq!(left, &pair[..]);
                    assert_eq!(right, &s.block()[i][..]);
                } else {
                    let j = i - k;
                    assert!(left.iter().all(|&b| b == 0));
                    let pair: Vec<u8> = (0..2 * m).map(|c| (c / 2 == j) as u8).collect();
                    assert_eq!(right, &pair[..]);
                }
            }
        }
    }
}

#[test]
fn jst_small_example() {
    let s = ordtope::transforms::JstMatrix::with_block(1, 1, vec![vec![0, 1]]).unwrap();
    assert_eq!(s.rows(), &[vec![1, 1, 0, 1], vec![0, 0, 1, 1]][..]);
    assert!(build_jst(0, 1, 0).is_err());
}

#[test]
fn jst_is_seeded() {
    assert_eq!(build_jst(3, 2, 5).unwrap(), build_jst(3, 2, 5).unwrap());
}

#[test]
fn code2_sorted_matches_code1_order() {
    for k in 1..=5 {
        for m in 1..=(10 - k).min(5) {
            let s = build_jst(k, m, 7).unwrap();
            let cols = 2 * (k + m);
            let basis = gen_primes(cols, PrimeSequence::First, 6).unwrap();
            let d = required_digits(&basis, cols, 1).unwrap().max(6);
            let c = jst_lcodes(&s, &basis, d, 1).unwrap();
            let mut by_code2: Vec<usize> = (0..k + m).collect();
            by_code2.sort_by(|&a, &b| c.code2[a].cmp(&c.code2[b]));
            assert_eq!(by_code2, c.order);
            for w in c.order.windows(2) {
                assert!(c.code2[w[0]] < c.code2[w[1]]);
                assert!(c.code1[w[0]] <= c.code1[w[1]]);
            }
        }
    }
}

#[test]
fn jst_audit_is_deterministic() {
    let a = audit_jst_orders(2, 2, 1, 42, 6).unwrap();
    let b = audit_jst_orders(2, 2, 1, 42, 6).unwrap();
    assert_eq!(
        serde_json::to_string(&a).unwrap(),
        serde_json::to_string(&b).unwrap()
    );
    assert_eq!(a.len(), 5);
    assert!(a.iter().all(|r| r.verdict != Verdict::BudgetExceeded));
}

#[test]
fn oversized_audit_reports_budget() {
    let r = audit_jst_orders(20, 20, 1, 42, 6).unwrap();
    assert!(r.iter().all(|r| r.verdict == Verdict::BudgetExceeded && r.partial));
}
