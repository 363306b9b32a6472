mod common;

use std::collections::BTreeSet;

use num::{One, Zero};
use proptest::prelude::*;
use rand::Rng;
use sfm_core::prob::{
    bn_import, extend, implied_conditional, marginal, push_forward, realize, Outcome, Probability,
};
use sfm_core::{satisfies, Assignment, Budget, NodeId, SfmError};

use common::*;

proptest! {
    #![proptest_config(config(200))]

    #[test]
    fn downward_closure_rule(seed in any::<u64>()) {
        let mut r = rng(seed);
        let m = random_model(&mut r, 6, 3);
        let s = random_subset(&mut r, m.nodes(), 0.5);
        let closed = s.iter().all(|u| m.children(u).iter().all(|c| s.contains(c)));
        match extend(&m, &s, Default::default()) {
            Ok(pm) => {
                prop_assert!(closed);
                prop_assert_eq!(pm.random_nodes(), &s);
            }
            Err(SfmError::NotDownwardClosed { node, descendant }) => {
                prop_assert!(!closed);
                prop_assert!(s.contains(&node) && !s.contains(&descendant));
            }
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
    }

    #[test]
    fn realized_worlds_satisfy_the_base(seed in any::<u64>()) {
        let mut r = rng(seed);
        let pm = random_prob_model(&mut r);
        let coords: Vec<(String, usize)> = pm
            .sources_in_play(&Assignment::new())
            .into_iter()
            .map(|(s, d)| (s.to_string(), r.random_range(0..d.len())))
            .collect();
        let world = realize(&pm, &Assignment::new(), &Outcome::new(coords)).unwrap();
        prop_assert!(satisfies(pm.base(), &world).unwrap());
    }

    #[test]
    fn push_forward_is_a_distribution(seed in any::<u64>()) {
        let mut r = rng(seed);
        let pm = random_prob_model(&mut r);
        let law = push_forward(&pm, &Assignment::new(), Budget::DEFAULT).unwrap();
        let total: Probability = law.values().fold(Probability::zero(), |a, p| a + p);
        prop_assert!(total.is_one());
        for w in law.keys() {
            prop_assert!(satisfies(pm.base(), w).unwrap());
        }
    }

    #[test]
    fn independent_sources_factorize(seed in any::<u64>()) {
        let mut r = rng(seed);
        let pm = random_prob_model(&mut r);
        let rvs: Vec<(&NodeId, &str)> =
            pm.exo_distributions().iter().map(|(u, rv)| (u, rv.source.as_str())).collect();
        let law = push_forward(&pm, &Assignment::new(), Budget::DEFAULT).unwrap();
        for (i, (a, sa)) in rvs.iter().enumerate() {
            for (b, sb) in &rvs[i + 1..] {
                if sa == sb {
                    continue;
                }
                let joint = marginal(&law, &BTreeSet::from([(*a).clone(), (*b).clone()]));
                let ma = marginal(&law, &BTreeSet::from([(*a).clone()]));
                let mb = marginal(&law, &BTreeSet::from([(*b).clone()]));
                for (wa, pa) in &ma {
                    for (wb, pb) in &mb {
                        let key = wa.merged(wb);
                        let pj = joint.get(&key).cloned().unwrap_or_else(Probability::zero);
                        prop_assert_eq!(pj, pa * pb);
                    }
                }
            }
        }
    }

    #[test]
    fn imported_conditionals_equal_cpt_rows(seed in any::<u64>()) {
        let bn = random_bn(&mut rng(seed), 4, 3);
        let pm = bn_import(&bn).unwrap();
        for n in bn.nodes() {
            for (tuple, row) in &n.cpt {
                let implied = implied_conditional(&pm, &n.name, tuple).unwrap();
                let expected: std::collections::BTreeMap<_, _> = row.support().iter().cloned().collect();
                prop_assert_eq!(implied, expected);
            }
        }
    }
}
