//! Human-readable rendering: exact rationals first, decimal approximations
//! in parentheses.

use finmeas::{BayesResult, FisherResult, SimReport, Verdict};

pub fn verdict(v: &Verdict) -> String {
    let mut out = format!("verdict: {}\n", v.kind);
    if let Some(states) = &v.inferred_state {
        out.push_str(&format!("inferred state: {}\n", states.join(", ")));
    }
    if let Some(posterior) = &v.posterior {
        out.push_str("posterior:\n");
        for (label, weight) in posterior.space().labels().iter().zip(posterior.weights()) {
            out.push_str(&format!("  {label}: {}\n", weight.human()));
        }
    }
    out
}

pub fn fisher(res: &FisherResult) -> String {
    format!(
        "maximizers: {}\nmax: {}\n",
        res.maximizers.join(", "),
        res.max_likelihood.human()
    )
}

pub fn bayes(res: &BayesResult) -> String {
    let mut out = String::from("posterior:\n");
    for (label, weight) in res.posterior.space().labels().iter().zip(res.posterior.weights()) {
        out.push_str(&format!("  {label}: {}\n", weight.human()));
    }
    out.push_str(&format!("evidence: {}\n", res.evidence.human()));
    out
}

pub fn sim_report(report: &SimReport) -> String {
    let labels = &report.labels;
    let mut out = format!("trials: {}\n", report.trials);
    out.push_str(&format!(
        "counts (state x utterance):\n      {:>10} {:>10} {:>10}\n",
        labels[0], labels[1], labels[2]
    ));
    for (m, row) in report.counts.iter().enumerate() {
        out.push_str(&format!(
            "  {:<4}{:>10} {:>10} {:>10}\n",
            labels[m], row[0], row[1], row[2]
        ));
    }
    out.push_str("conditional state frequencies given each utterance:\n");
    for (u, row) in report.conditional.iter().enumerate() {
        out.push_str(&format!(
            "  {:<4}{:>10.5} {:>10.5} {:>10.5}\n",
            labels[u], row[0], row[1], row[2]
        ));
    }
    out.push_str(&format!(
        "invalid utterances: observer {}, revealing {}\n",
        report.invalid_observer_utterances, report.invalid_revealing_utterances
    ));
    out
}
