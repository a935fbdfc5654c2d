use abelmod::check::{run_suite, Execution, SuiteConfig};
use abelmod::linalg::Mode;

fn report(mode: Mode, execution: Execution) -> String {
    let config = SuiteConfig {
        mode,
        scale: 0.02,
        execution,
        ..SuiteConfig::default()
    };
    serde_json::to_string(&run_suite(&config)).unwrap()
}

#[test]
fn scheduling_does_not_change_the_report() {
    for mode in [Mode::Exact, Mode::Float] {
        let seq = report(mode, Execution::Sequential);
        assert_eq!(seq, report(mode, Execution::Parallel), "{mode}");
        assert!(seq.contains("\"passed\":true"), "{seq}");
    }
}
