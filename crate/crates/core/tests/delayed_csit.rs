use uldl_dof::delayed::{run_delayed_scheme, run_on_trace, DelayedChannelTrace, DECODE_TOL};
use uldl_dof::sim::channel_rng;
use uldl_dof::*;

#[test]
fn thousand_runs_decode() {
    let reports: Vec<_> = (0..1000).map(|s| run_delayed_scheme(s, None)).collect();
    let ok = reports.iter().filter(|r| r.passed).count();
    assert!(ok >= 990, "{ok}");
    assert!(reports.iter().all(|r| r.causality_ok));
    assert!(reports.iter().all(|r| r.dof == Rational::new(5, 4)));
}

#[test]
fn every_slot_four_coefficient_is_past_only() {
    let r = run_delayed_scheme(5, None);
    for c in &r.transmit_coefficients {
        assert!(c.depends_on.iter().all(|&s| s < c.slot), "{c:?}");
    }
}

#[test]
fn given_symbols_are_recovered() {
    let syms = [1.5, -2.0, 0.25, 3.0, -0.5];
    let r = run_delayed_scheme(8, Some(syms));
    assert_eq!(r.symbols_sent, syms);
    assert!(r.max_abs_error < DECODE_TOL);
}

#[test]
fn singular_decode_is_flagged() {
    let mut ch = DelayedChannelTrace::draw(&mut channel_rng(1));
    ch.h_vec[2] = ch.g_vec[2];
    let r = run_on_trace(&ch, [1.0; 5], 1);
    assert!(r.flagged);
    assert!(!r.passed);
}

#[test]
fn beats_conventional_but_not_instantaneous() {
    let c = CellConfig::new(1, 2, 2, 1).unwrap();
    let dof = Rational::new(5, 4);
    assert_eq!(conventional_upper(&c), Rational::ONE);
    assert!(conventional_upper(&c) < dof);
    assert_eq!(sum_dof(&c), Rational::new(3, 2));
    assert!(sum_dof(&c) >= dof);
}
