use std::fs;
use std::io::Write;

use annosched_core::dataset::{ingest, prepare_splits, write_json_lines};
use annosched_core::simulation::{compare, generate_drift_stream, run, DataSource, DriftSpec, SimulationConfig};
use annosched_core::{ClassSet, DecayPreset, Error, SamplerPolicy, Schema, SplitOptions};

#[test]
fn synthetic_stream_round_trips_through_ingest() {
    let dir = tempfile::tempdir().unwrap();
    let data = generate_drift_stream(&DriftSpec::hurricane(25), 4).unwrap();
    let path = dir.path().join("stream.jsonl");
    write_json_lines(fs::File::create(&path).unwrap(), &data, &ClassSet::crisis()).unwrap();

    let back = ingest(&path, 0.0, &Schema::default()).unwrap();
    assert_eq!(back, data);

    let splits = prepare_splits(&back, &ClassSet::crisis(), &SplitOptions::default()).unwrap();
    assert_eq!(splits.test.len(), data.len() / 5);
    assert_eq!(splits.warmup.len(), 80);
    assert_eq!(splits.stream.len(), data.len() - data.len() / 5 - 80);
}

#[test]
fn file_and_synthetic_sources_agree() {
    let dir = tempfile::tempdir().unwrap();
    let synthetic = SimulationConfig::synthetic(25, 8);
    let DataSource::Synthetic { drift, seed } = &synthetic.data else {
        unreachable!()
    };
    let path = dir.path().join("stream.jsonl");
    let data = generate_drift_stream(drift, *seed).unwrap();
    write_json_lines(fs::File::create(&path).unwrap(), &data, &ClassSet::crisis()).unwrap();

    let from_file = SimulationConfig {
        data: DataSource::File {
            path,
            schema: Schema::default(),
            min_confidence: 0.0,
        },
        ..synthetic.clone()
    };
    let a = run(&synthetic).unwrap();
    let b = run(&from_file).unwrap();
    assert_eq!(a.intervals, b.intervals);
    assert_eq!(a.manifest.dataset_fingerprint, b.manifest.dataset_fingerprint);
}

#[test]
fn delimited_input_with_confidence_filter() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("tweets.csv");
    let mut f = fs::File::create(&path).unwrap();
    writeln!(f, "id,timestamp,text,label,confidence").unwrap();
    writeln!(
        f,
        "a,3,\"roads closed, bridge down\",infrastructure_and_utility_damage,0.9"
    )
    .unwrap();
    writeln!(f, "b,1,send water,rescue_volunteering_donation,0.65").unwrap();
    writeln!(f, "c,2,lost my house,affected_individuals,0.5").unwrap();
    drop(f);
    let rows = ingest(&path, 0.65, &Schema::default()).unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0].text, "roads closed, bridge down");
}

#[test]
fn missing_dataset_is_reported_before_any_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let config = SimulationConfig {
        data: DataSource::File {
            path: dir.path().join("nope.jsonl"),
            schema: Schema::default(),
            min_confidence: 0.65,
        },
        out_dir: Some(out.clone()),
        ..SimulationConfig::synthetic(25, 0)
    };
    assert!(matches!(run(&config), Err(Error::MissingInput(_))));
    assert!(!out.exists());
}

#[test]
fn starved_class_names_itself() {
    let mut config = SimulationConfig::synthetic(25, 0);
    config.n_warmup = 500;
    match run(&config) {
        Err(Error::InsufficientClass { class, .. }) => assert_eq!(class, "infrastructure_and_utility_damage"),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn comparison_outputs_are_plot_ready() {
    let configs: Vec<_> = [DecayPreset::None, DecayPreset::Fast]
        .into_iter()
        .flat_map(|d| {
            SamplerPolicy::ALL.into_iter().map(move |p| {
                let mut c = SimulationConfig::synthetic(25, 2);
                c.decay = d.into();
                c.policy = p;
                c
            })
        })
        .collect();
    let cmp = compare(&configs).unwrap();
    let mut long = Vec::new();
    cmp.write_long(&mut long).unwrap();
    let long = String::from_utf8(long).unwrap();
    assert!(long.starts_with("run_id,policy,decay,interval,metric,value\n"));
    assert!(long.contains("error_avoidance-fast,error_avoidance,fast,1,macro_auc,"));

    // error-free runs never record oracle errors
    for r in cmp.runs.iter().filter(|r| r.decay == "none") {
        assert!(r.intervals().iter().all(|m| m.n_oracle_errors == 0));
    }
}
