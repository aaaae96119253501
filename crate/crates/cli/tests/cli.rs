use std::path::Path;
use std::process::{Command, Output};

use holepred::rng::component_rng;
use holepred::{Network, NetworkTopology};

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_holepred"))
        .args(args)
        .current_dir(dir)
        .output()
        .unwrap()
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let out = run(dir, args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

/// Period-3 occupancy pattern: trivially predictable from 3 past slots.
fn write_periodic(path: &Path, len: usize) {
    let mut text = String::from("slot,bit\n");
    for i in 0..len {
        text.push_str(&format!("{i},{}\n", u8::from(i % 3 == 0)));
    }
    std::fs::write(path, text).unwrap();
}

#[test]
fn bands_lists_presets_with_channel_counts() {
    let dir = tempfile::tempdir().unwrap();
    let out = ok(dir.path(), &["bands"]);
    assert!(out.contains("GSM Uplink,890,895,200,25"));
    assert!(out.contains("Broadcasting,700,806,200,530"));
    assert!(out.contains("3G 1800 Downlink,1865,1880,200,75"));
    assert_eq!(out.lines().count(), 6);
    let json: serde_json::Value =
        serde_json::from_str(&ok(dir.path(), &["bands", "--format", "json"])).unwrap();
    assert_eq!(json[1]["channels"], 25);
}

#[test]
fn generate_writes_requested_rows_deterministically() {
    let dir = tempfile::tempdir().unwrap();
    let stdout = ok(
        dir.path(),
        &[
            "generate",
            "--channels",
            "1",
            "--sweeps",
            "2700",
            "--seed",
            "7",
            "--out",
            "a.csv",
        ],
    );
    assert!(stdout.contains("bayes_floor = 0.1333"));
    ok(
        dir.path(),
        &[
            "generate",
            "--channels",
            "1",
            "--sweeps",
            "2700",
            "--seed",
            "7",
            "--out",
            "b.csv",
        ],
    );
    let a = std::fs::read_to_string(dir.path().join("a.csv")).unwrap();
    assert_eq!(a.lines().count(), 2701);
    assert_eq!(
        a,
        std::fs::read_to_string(dir.path().join("b.csv")).unwrap()
    );
    ok(
        dir.path(),
        &[
            "generate", "--sweeps", "2700", "--seed", "8", "--out", "c.csv",
        ],
    );
    assert_ne!(
        a,
        std::fs::read_to_string(dir.path().join("c.csv")).unwrap()
    );
}

#[test]
fn generate_validates_its_flags() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(
        code(&run(
            dir.path(),
            &["generate", "--sweeps", "0", "--out", "x.csv"]
        )),
        2
    );
    assert_eq!(
        code(&run(
            dir.path(),
            &["generate", "--p-idle-to-busy", "1.5", "--out", "x.csv"]
        )),
        2
    );
    assert_eq!(
        code(&run(
            dir.path(),
            &[
                "generate",
                "--band",
                "GSM Uplink",
                "--channels",
                "3",
                "--out",
                "x.csv"
            ]
        )),
        2
    );
    assert_eq!(
        code(&run(
            dir.path(),
            &["generate", "--band", "nowhere", "--out", "x.csv"]
        )),
        2
    );
    assert_eq!(code(&run(dir.path(), &["generate", "--frobnicate"])), 2);
    assert!(!dir.path().join("x.csv").exists());
    ok(
        dir.path(),
        &[
            "generate",
            "--band",
            "gsm-uplink",
            "--sweeps",
            "5",
            "--out",
            "g.csv",
        ],
    );
    let header = std::fs::read_to_string(dir.path().join("g.csv")).unwrap();
    assert!(header.starts_with("sweep_index,slot_duration_s,ch_0,"));
    assert!(header.lines().next().unwrap().ends_with(",ch_24"));
}

#[test]
fn train_writes_model_logs_and_config() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(
        d,
        &[
            "generate", "--sweeps", "400", "--seed", "7", "--out", "s.csv",
        ],
    );
    let stdout = ok(
        d,
        &[
            "train",
            "--in",
            "s.csv",
            "--out",
            "run",
            "--trainer",
            "ga+lm",
            "--hidden",
            "10",
            "--order",
            "10",
            "--seed",
            "7",
            "--generations",
            "5",
            "--max-iter",
            "5",
        ],
    );
    assert!(stdout.contains("final_error = "));
    let model: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(d.join("run/model.json")).unwrap()).unwrap();
    assert_eq!(model["topology"]["hidden_sizes"], serde_json::json!([10]));
    let ga_log = std::fs::read_to_string(d.join("run/ga_log.csv")).unwrap();
    assert!(ga_log.starts_with("generation,best_fitness,mean_fitness,best_error\n"));
    assert_eq!(ga_log.lines().count(), 7);
    let train_log = std::fs::read_to_string(d.join("run/train_log.csv")).unwrap();
    assert!(train_log.starts_with("iteration,error,mu_or_eta,accepted\n"));
    let config = std::fs::read_to_string(d.join("run/run_config")).unwrap();
    assert!(config.contains("threshold-dbm = -89\n"));
    assert!(config.contains("seed = 7\n"));

    // Identical flags reproduce the model byte for byte.
    ok(
        d,
        &[
            "train",
            "--in",
            "s.csv",
            "--out",
            "run2",
            "--trainer",
            "ga+lm",
            "--hidden",
            "10",
            "--order",
            "10",
            "--seed",
            "7",
            "--generations",
            "5",
            "--max-iter",
            "5",
        ],
    );
    assert_eq!(
        std::fs::read(d.join("run/model.json")).unwrap(),
        std::fs::read(d.join("run2/model.json")).unwrap()
    );

    // The echoed config replays the run.
    ok(d, &["train", "--config", "run/run_config", "--out", "run3"]);
    assert_eq!(
        std::fs::read(d.join("run/model.json")).unwrap(),
        std::fs::read(d.join("run3/model.json")).unwrap()
    );
}

#[test]
fn lm_with_no_iterations_keeps_the_initialization() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    write_periodic(&d.join("occ.csv"), 60);
    ok(
        d,
        &[
            "train",
            "--in",
            "occ.csv",
            "--out",
            "run",
            "--trainer",
            "lm",
            "--max-iter",
            "0",
            "--order",
            "3",
            "--hidden",
            "4",
            "--seed",
            "5",
        ],
    );
    let model = Network::load(&d.join("run/model.json")).unwrap();
    let t = NetworkTopology::new(3, vec![4], 1).unwrap();
    let init = Network::init_random(&t, -1.0, 1.0, &mut component_rng(5, "init")).unwrap();
    assert_eq!(model, init);
    assert!(!d.join("run/ga_log.csv").exists());
}

#[test]
fn config_file_composes_with_flags() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    write_periodic(&d.join("occ.csv"), 60);
    std::fs::write(
        d.join("cfg"),
        "# small run\ntrainer = lm\norder = 3\nhidden = 4\nmax-iter = 3\nseed = 1\n",
    )
    .unwrap();
    ok(
        d,
        &[
            "train", "--config", "cfg", "--in", "occ.csv", "--out", "run", "--seed", "2",
        ],
    );
    let echoed = std::fs::read_to_string(d.join("run/run_config")).unwrap();
    assert!(echoed.contains("seed = 2\n"));
    assert!(echoed.contains("trainer = lm\n"));
    assert!(echoed.contains("max-iter = 3\n"));

    std::fs::write(d.join("bad"), "learning-rate = 0.5\n").unwrap();
    let out = run(
        d,
        &[
            "train", "--config", "bad", "--in", "occ.csv", "--out", "run",
        ],
    );
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown config key"));
}

#[test]
fn evaluate_recomputes_the_split() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    write_periodic(&d.join("occ.csv"), 90);
    ok(
        d,
        &[
            "train",
            "--in",
            "occ.csv",
            "--out",
            "run",
            "--trainer",
            "lm",
            "--order",
            "3",
            "--hidden",
            "3",
            "--seed",
            "3",
        ],
    );

    let stdout = ok(
        d,
        &[
            "evaluate",
            "--model",
            "run/model.json",
            "--out",
            "train_side",
            "--side",
            "train",
        ],
    );
    assert!(stdout.contains("error_rate = 0 "), "{stdout}");
    let summary = std::fs::read_to_string(d.join("train_side/summary.csv")).unwrap();
    let row: Vec<&str> = summary.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[0], "occ");
    assert_eq!(row[2], "44");
    assert_eq!(row[3], "0");

    ok(
        d,
        &[
            "evaluate",
            "--model",
            "run/model.json",
            "--out",
            "test_side",
            "--trace",
            "--format",
            "json",
            "--band",
            "Periodic",
        ],
    );
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(d.join("test_side/summary.json")).unwrap())
            .unwrap();
    assert_eq!(json["reports"][0]["patterns"], 43);
    assert_eq!(json["band_means"][0]["band"], "Periodic");
    let trace = std::fs::read_to_string(d.join("test_side/trace_periodic_ch0.csv")).unwrap();
    assert!(
        trace.starts_with("slot,predicted,actual\n47,"),
        "test side starts after the training slots"
    );
    assert!(std::fs::read_to_string(d.join("test_side/run_config"))
        .unwrap()
        .contains("side = test\n"));
}

#[test]
fn evaluate_rejects_a_mismatched_window() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    write_periodic(&d.join("occ.csv"), 40);
    ok(
        d,
        &[
            "train",
            "--in",
            "occ.csv",
            "--out",
            "run",
            "--trainer",
            "lm",
            "--order",
            "3",
            "--hidden",
            "2",
            "--max-iter",
            "2",
        ],
    );
    let out = run(
        d,
        &[
            "evaluate",
            "--model",
            "run/model.json",
            "--out",
            "rep",
            "--order",
            "5",
        ],
    );
    assert_eq!(code(&out), 4);
    assert!(String::from_utf8_lossy(&out.stderr).contains("window order vs model order"));
    assert_eq!(
        code(&run(
            d,
            &["evaluate", "--model", "missing/model.json", "--out", "rep"]
        )),
        4
    );
}

#[test]
fn train_reports_data_and_numerical_failures() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(
        d.join("bad.csv"),
        "sweep_index,slot_duration_s,ch_0\n0,16,-90\n1,16,oops\n",
    )
    .unwrap();
    let out = run(
        d,
        &[
            "train",
            "--in",
            "bad.csv",
            "--out",
            "run",
            "--threshold-dbm",
            "-90",
        ],
    );
    assert_eq!(code(&out), 4);
    assert!(String::from_utf8_lossy(&out.stderr).contains("bad.csv:3:"));

    ok(d, &["generate", "--sweeps", "100", "--out", "s.csv"]);
    std::fs::remove_file(d.join("s.csv.meta.json")).unwrap();
    assert_eq!(
        code(&run(d, &["train", "--in", "s.csv", "--out", "run"])),
        2
    );

    write_periodic(&d.join("occ.csv"), 60);
    let out = run(
        d,
        &[
            "train",
            "--in",
            "occ.csv",
            "--out",
            "run",
            "--trainer",
            "gd",
            "--eta",
            "1e300",
            "--order",
            "3",
            "--hidden",
            "2",
        ],
    );
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("diverged"));
    assert!(d.join("run/model.json").exists());
}

#[test]
fn every_subcommand_documents_its_flags() {
    let dir = tempfile::tempdir().unwrap();
    let help = ok(dir.path(), &["train", "--help"]);
    for flag in [
        "--seed",
        "--order",
        "--hidden",
        "--trainer",
        "--eta",
        "--theta",
        "--mu0",
        "--beta",
        "--pop-size",
        "--generations",
        "--crossover-prob",
        "--mutation-prob",
        "--threshold-dbm",
        "--split",
        "--split-mode",
        "--band",
        "--channel",
        "--in",
        "--out",
    ] {
        assert!(help.contains(flag), "train --help lacks {flag}");
    }
    assert!(help.contains("[default: 0.01]"));
    let help = ok(dir.path(), &["evaluate", "--help"]);
    assert!(help.contains("--format") && help.contains("--side"));
    let help = ok(dir.path(), &["generate", "--help"]);
    assert!(help.contains("--sweeps") && help.contains("[default: 2700]"));
}
