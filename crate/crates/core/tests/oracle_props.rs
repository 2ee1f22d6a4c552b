mod common;

use cdgraph::families::{gamma_kt, gamma_l, gamma_r};
use cdgraph::oracle::rules::check_palfy;
use cdgraph::oracle::{
    replay, replay_verdict, Certificate, KnowledgeBase, Oracle, Rule, RuleSet, Verdict, VerdictKind,
};
use cdgraph::Graph;
use common::*;
use rand::Rng;

fn corpus() -> Vec<Graph> {
    let mut out: Vec<Graph> = (1..=6).flat_map(all_graphs).collect();
    let mut r = rng(11);
    for _ in 0..300 {
        let n = r.gen_range(7..=9);
        out.push(random_graph(n, r.gen_range(0.3..0.9), &mut r));
    }
    for k in 1..=4 {
        for t in 1..=k {
            out.push(gamma_kt(k, t).unwrap());
            out.push(gamma_l(k, t).unwrap());
            out.push(gamma_r(k, t).unwrap());
        }
    }
    for k in 2..=4 {
        let g = gamma_l(k, 1).unwrap();
        for v in 0..g.n() {
            out.push(g.remove_vertex(v));
        }
    }
    out
}

#[test]
fn every_certificate_replays() {
    let o = Oracle::default();
    let mut by_rule = std::collections::BTreeMap::<&str, usize>::new();
    for g in corpus() {
        let v = o.classify(&g);
        replay_verdict(&g, &v, o.kb()).unwrap_or_else(|e| panic!("{e}: {g:?} {v:?}"));
        if let Some(c) = v.certificate() {
            *by_rule.entry(c.tag()).or_default() += 1;
        }
    }
    for rule in ["PalfyTriple", "OddComplementCycle", "PalfyInequality", "DiamThreeBound", "KnownFamily", "KnownOccurs"] {
        assert!(by_rule.contains_key(rule), "{rule} never fired: {by_rule:?}");
    }
}

#[test]
fn component_rule_replays_without_the_triple_rules() {
    // any graph the component rule would reject already has an independent triple
    let o = Oracle::new(
        KnowledgeBase::default(),
        RuleSet::default().without(Rule::PalfyTriple).without(Rule::OddComplementCycle),
    );
    let mut fired = 0;
    for g in (1..=6).flat_map(all_graphs) {
        let v = o.classify(&g);
        replay_verdict(&g, &v, o.kb()).unwrap();
        if let Some(Certificate::BadComponents { .. }) = v.certificate() {
            assert!(check_palfy(&g).is_some());
            for bad in corruptions(&g, v.certificate().unwrap()) {
                assert!(replay(&g, &bad, o.kb()).is_err());
            }
            fired += 1;
        }
    }
    assert!(fired > 0);
}

#[test]
fn palfy_is_monotone_under_edge_removal() {
    let mut r = rng(12);
    for _ in 0..500 {
        let g = random_graph(r.gen_range(4..=9), 0.4, &mut r);
        if check_palfy(&g).is_none() {
            continue;
        }
        let edges = g.edges();
        for _ in 0..10 {
            let drop: Vec<(usize, usize)> = edges.iter().copied().filter(|_| r.gen_bool(0.3)).collect();
            assert!(check_palfy(&g.remove_edges(&drop)).is_some());
        }
    }
}

#[test]
fn memoization_is_transparent() {
    let o = Oracle::default();
    let fresh = Oracle::default();
    let mut r = rng(13);
    for g in corpus().into_iter().step_by(7) {
        let p = g.permuted(&random_perm(g.n(), &mut r));
        let (a, b) = (o.classify(&g), o.classify(&p));
        assert_eq!(a.kind(), b.kind(), "{g:?}");
        replay_verdict(&p, &b, o.kb()).unwrap();
        assert_eq!(fresh.classify_uncached(&p).kind(), b.kind());
    }
    assert!(o.stats().hits > 0);
}

#[test]
fn rule_order_never_flips_verdicts() {
    let base = Oracle::default();
    let mut r = rng(14);
    let graphs = corpus();
    for _ in 0..12 {
        let order = {
            let mut v = Rule::ALL.to_vec();
            let p = random_perm(v.len(), &mut r);
            v = p.iter().map(|&i| v[i]).collect();
            v
        };
        let shuffled = Oracle::new(KnowledgeBase::default(), RuleSet::from_order(order));
        for g in graphs.iter().step_by(5) {
            let (a, b) = (base.classify(g).kind(), shuffled.classify(g).kind());
            assert!(
                !matches!((a, b), (VerdictKind::Occurs, VerdictKind::NotOccurs) | (VerdictKind::NotOccurs, VerdictKind::Occurs)),
                "{g:?}"
            );
            replay_verdict(g, &shuffled.classify(g), shuffled.kb()).unwrap();
        }
    }
}

#[test]
fn corrupted_certificates_are_rejected() {
    let o = Oracle::default();
    let mut graphs = corpus();
    // graphs that reach the diameter-three rules
    graphs.push(Graph::from_edges(6, &[(0, 3), (1, 2), (1, 4), (2, 3), (3, 4), (3, 5)]).unwrap());
    let mut checked = 0;
    for g in &graphs {
        let v = o.classify(g);
        let Verdict::NotOccurs(c) = &v else { continue };
        for bad in corruptions(g, c) {
            assert!(replay(g, &bad, o.kb()).is_err(), "accepted {bad:?} for {g:?}");
            checked += 1;
        }
        // the same certificate under the wrong verdict
        assert!(replay_verdict(g, &Verdict::Occurs(c.clone()), o.kb()).is_err());
        // every certificate is specific to its graph
        let complete = Graph::complete(g.n());
        assert!(replay(&complete, c, o.kb()).is_err(), "{c:?} replays on K{}", g.n());
        checked += 2;
    }
    assert!(checked > 10_000);
}

#[test]
fn random_index_mutations_never_slip_through_undetected() {
    // a mutated Pálfy triple is accepted exactly when it is a real independent triple
    let o = Oracle::default();
    let mut r = rng(15);
    for _ in 0..3000 {
        let n = r.gen_range(3..=8);
        let g = random_graph(n, 0.5, &mut r);
        let Verdict::NotOccurs(Certificate::PalfyTriple { mut triple }) = o.classify(&g) else { continue };
        triple[r.gen_range(0..3)] = r.gen_range(0..n + 2);
        let [a, b, c] = triple;
        let valid = a.max(b).max(c) < n
            && a != b
            && b != c
            && a != c
            && !g.has_edge(a, b)
            && !g.has_edge(a, c)
            && !g.has_edge(b, c);
        assert_eq!(replay(&g, &Certificate::PalfyTriple { triple }, o.kb()).is_ok(), valid);
    }
}

#[test]
fn corrupted_chain_and_induction_certificates_are_rejected() {
    let kb = KnowledgeBase::default();
    let g = Graph::from_edges(6, &[(0, 3), (1, 2), (1, 4), (2, 3), (3, 4), (3, 5)]).unwrap();
    let chain = cdgraph::oracle::rules::check_diam3_chain(&g, 16).unwrap().unwrap();
    replay(&g, &chain, &kb).unwrap();
    let bad = corruptions(&g, &chain);
    assert_eq!(bad.len(), 2);
    for c in bad {
        assert!(replay(&g, &c, &kb).is_err(), "{c:?}");
    }

    let kb = kb.with_left_not_occurs(2, 1).unwrap();
    let o = Oracle::default().with_kb(kb.clone());
    let g = gamma_l(2, 1).unwrap().permuted(&[2, 4, 0, 1, 5, 3]);
    let v = o.classify(&g);
    assert!(matches!(v.certificate(), Some(Certificate::KnownNotOccurs { .. })));
    for c in corruptions(&g, v.certificate().unwrap()) {
        assert!(replay(&g, &c, &kb).is_err());
    }
    // without the injected fact the certificate has no standing
    assert!(replay(&g, v.certificate().unwrap(), &KnowledgeBase::default()).is_err());
}
