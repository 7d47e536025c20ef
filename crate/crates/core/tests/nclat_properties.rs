use std::collections::BTreeSet;

use meandric::nclat::{catalan, enumerate_nc, NcIter, NcPartition, Point};
use proptest::prelude::*;

fn cycles(perm: &[usize]) -> usize {
    let mut seen = vec![false; perm.len()];
    let mut count = 0;
    for s in 0..perm.len() {
        if !seen[s] {
            count += 1;
            let mut i = s;
            while !seen[i] {
                seen[i] = true;
                i = perm[i];
            }
        }
    }
    count
}

fn length(perm: &[usize]) -> usize {
    perm.len() - cycles(perm)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                cur.push(v);
                rec(cur, used, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

#[test]
fn geodesic_permutations_are_exactly_the_non_crossing_ones() {
    for n in 1..=6 {
        let full: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        let mut geodesic = BTreeSet::new();
        for p in permutations(n) {
            // p^{-1} full
            let mut inv = vec![0; n];
            for (i, &v) in p.iter().enumerate() {
                inv[v] = i;
            }
            let q: Vec<usize> = (0..n).map(|i| inv[full[i]]).collect();
            if length(&p) + length(&q) == n - 1 {
                geodesic.insert(p);
            }
        }
        let nc: BTreeSet<Vec<usize>> = enumerate_nc(n)
            .unwrap()
            .iter()
            .map(|p| p.perm().iter().map(|&v| v as usize).collect())
            .collect();
        assert_eq!(geodesic, nc, "n = {n}");
        for p in &nc {
            assert!(NcPartition::from_perm(p).is_ok());
        }
    }
}

#[test]
fn catalan_counts() {
    for n in 1..=14 {
        assert_eq!(NcIter::new(n).unwrap().count() as u64, catalan(n), "n = {n}");
    }
    assert_eq!(catalan(14), 2_674_440);
}

#[test]
fn lattice_axioms() {
    for n in 1..=6 {
        let all = enumerate_nc(n).unwrap();
        for p in &all {
            assert_eq!(&p.meet(p).unwrap(), p);
            assert_eq!(&p.join(p).unwrap(), p);
            assert!(NcPartition::zero(n).leq(p).unwrap());
            assert!(p.leq(&NcPartition::one(n)).unwrap());
            for q in &all {
                let m = p.meet(q).unwrap();
                let j = p.join(q).unwrap();
                assert_eq!(m, q.meet(p).unwrap());
                assert_eq!(j, q.join(p).unwrap());
                assert_eq!(&p.meet(&j).unwrap(), p);
                assert_eq!(&p.join(&m).unwrap(), p);
                assert!(m.leq(p).unwrap() && m.leq(q).unwrap());
                assert!(p.leq(&j).unwrap() && q.leq(&j).unwrap());
                assert_eq!(p.leq(q).unwrap(), m == *p);
            }
        }
        // associativity on a sample
        for p in all.iter().step_by(3) {
            for q in all.iter().step_by(2) {
                for s in all.iter().step_by(5) {
                    assert_eq!(
                        p.meet(&q.meet(s).unwrap()).unwrap(),
                        p.meet(q).unwrap().meet(s).unwrap()
                    );
                    assert_eq!(
                        p.join(&q.join(s).unwrap()).unwrap(),
                        p.join(q).unwrap().join(s).unwrap()
                    );
                }
            }
        }
    }
}

#[test]
fn kreweras_is_an_anti_isomorphism() {
    for n in 1..=7 {
        let all = enumerate_nc(n).unwrap();
        for p in &all {
            assert_eq!(&p.kreweras().kreweras_inverse(), p);
            assert_eq!(p.length() + p.kreweras().length(), n - 1);
        }
        for p in &all {
            for q in &all {
                // De Morgan
                let kp = p.kreweras();
                let kq = q.kreweras();
                assert_eq!(p.meet(q).unwrap().kreweras(), kp.join(&kq).unwrap());
                assert_eq!(p.join(q).unwrap().kreweras(), kp.meet(&kq).unwrap());
            }
        }
    }
}

#[test]
fn kreweras_example() {
    let p = NcPartition::parse_cycles("(2,6)(3,4)", 6).unwrap();
    let k = p.kreweras();
    assert_eq!(k.n(), 6);
    assert_eq!(k.length(), 5 - p.length());
    assert_eq!(NcPartition::one(6).kreweras(), NcPartition::zero(6));
}

#[test]
fn fattening_lemma() {
    for n in 1..=8 {
        for p in enumerate_nc(n).unwrap() {
            let fat = p.fatten();
            assert!(fat.is_perfect_matching());
            assert!(fat.is_non_crossing());
            let perm = p.perm();
            for (x, y) in fat.pairs() {
                match (x.plus, y.plus) {
                    (false, true) => {
                        // (i-, j+): j maps to i, with i <= j
                        assert!(x.element <= y.element);
                        assert_eq!(perm[y.element] as usize, x.element);
                        if x.element == y.element {
                            assert_eq!(perm[x.element] as usize, x.element);
                        }
                    }
                    (true, false) => {
                        // (i+, j-), i < j: consecutive in an increasing cycle
                        assert!(x.element < y.element);
                        assert_eq!(perm[x.element] as usize, y.element);
                    }
                    _ => panic!("pair joins two points of the same sign"),
                }
            }
        }
    }
}

#[test]
fn fattening_is_injective() {
    for n in 1..=8 {
        let all = enumerate_nc(n).unwrap();
        let images: BTreeSet<Vec<usize>> = all
            .iter()
            .map(|p| {
                let f = p.fatten();
                (0..2 * n).map(|i| f.partner(i)).collect()
            })
            .collect();
        assert_eq!(images.len(), all.len());
    }
    let p = Point { element: 2, plus: true };
    assert_eq!(Point::from_position(p.position()), p);
    assert_eq!(p.to_string(), "3+");
}

#[test]
fn canonical_text_round_trips() {
    for n in 1..=8 {
        for p in enumerate_nc(n).unwrap() {
            let text = p.to_cycles();
            assert_eq!(NcPartition::parse_cycles(&text, n).unwrap().to_cycles(), text);
        }
    }
    assert!(NcPartition::parse_cycles("(1,3)(2,4)", 4).is_err());
    assert!(NcPartition::parse_cycles("(1,5)", 4).is_err());
    assert!(NcPartition::parse_cycles("(1,2)(2,3)", 4).is_err());
}

fn partition(n: usize) -> impl Strategy<Value = NcPartition> {
    let all = enumerate_nc(n).unwrap();
    (0..all.len()).prop_map(move |i| all[i].clone())
}

fn pair_of_partitions() -> impl Strategy<Value = (NcPartition, NcPartition)> {
    (1usize..=10).prop_flat_map(|n| (partition(n), partition(n)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn meet_and_join_bound_the_pair((p, q) in pair_of_partitions()) {
        let m = p.meet(&q).unwrap();
        let j = p.join(&q).unwrap();
        prop_assert!(m.leq(&p).unwrap() && m.leq(&q).unwrap());
        prop_assert!(p.leq(&j).unwrap() && q.leq(&j).unwrap());
        prop_assert!(m.length() <= p.length().min(q.length()));
        prop_assert!(j.length() >= p.length().max(q.length()));
        prop_assert_eq!(p.meet(&q).unwrap().kreweras(), p.kreweras().join(&q.kreweras()).unwrap());
    }

    #[test]
    fn kreweras_orbit_is_a_rotation((p, _q) in pair_of_partitions()) {
        // Kr^2 conjugates by the full cycle, so Kr^(2n) is the identity
        let n = p.n();
        let mut x = p.clone();
        for _ in 0..2 * n {
            x = x.kreweras();
        }
        prop_assert_eq!(x, p);
    }
}
