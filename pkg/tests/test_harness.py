import csv

import pytest
import yaml

from hemas.cli import main
from hemas.harness import (
    Campaign,
    ExperimentConfig,
    InvalidConfig,
    MixedInstances,
    compare_campaigns,
    config_from_dict,
    load_campaign,
    load_config,
    preset,
    render_report,
    run_campaign,
    run_single,
    write_comparison,
)
from hemas.hybrid import parse_rule
from hemas.stats import describe


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_presets():
    assert preset("emas").hybrid is None
    ops = preset("hemas2").hybrid.operators
    assert [(o.algorithm, o.rule.name) for o in ops] == [("pso", "ELQ1"), ("pso", "EGQ3")]
    ops = preset("hemas3").hybrid.operators
    assert len(ops) == 3 and ops[-1].algorithm == "ga" and ops[-1].rule == parse_rule("VG0.5")
    h1 = preset("hemas1", "rastrigin", 300)
    assert h1.hybrid.period == 2000 and h1.hybrid.operators[0].rule.name == "VE0"
    assert (h1.function, h1.dimension, h1.label) == ("rastrigin", 300, "hemas1")
    with pytest.raises(InvalidConfig):
        preset("hemas9")


def test_config_validation():
    with pytest.raises(InvalidConfig):
        ExperimentConfig("hemas", "ackley", 10)
    with pytest.raises(InvalidConfig):
        ExperimentConfig("emas", "rosenbrock", 10)
    with pytest.raises(InvalidConfig):
        ExperimentConfig("emas", "ackley", 10, repetitions=0)


def test_config_errors_name_the_field():
    d = preset("hemas2").to_dict()
    d["hybrid"]["operators"][1]["rule"] = "EQQ"
    with pytest.raises(InvalidConfig) as err:
        config_from_dict(d)
    assert err.value.path == "hybrid.operators[1].rule"


def test_config_yaml_round_trip(tmp_path):
    config = preset("hemas3", "griewank", 7, repetitions=3, master_seed=5)
    path = tmp_path / "c.yaml"
    path.write_text(yaml.safe_dump(config.to_dict()))
    again = load_config(path)
    assert again.to_dict() == config.to_dict()
    assert again.fingerprint() == config.fingerprint()


def test_fingerprint_ignores_bookkeeping():
    a = preset("hemas1", "sphere", 4)
    b = preset("hemas1", "sphere", 4, repetitions=2, output_dir="x")
    assert a.fingerprint() == b.fingerprint()
    assert a.fingerprint() != preset("hemas1", "sphere", 5).fingerprint()


def test_seed_prefix_stable():
    small = run_campaign(preset("emas", "sphere", 3, repetitions=2, master_seed=4))
    large = run_campaign(preset("emas", "sphere", 3, repetitions=4, master_seed=4))
    assert [r.seed for r in small] == [r.seed for r in large[:2]]
    assert [r.final_best_fitness for r in small] == [r.final_best_fitness for r in large[:2]]


def test_parallel_matches_serial():
    config = preset("hemas2", "sphere", 3, repetitions=3)
    serial = run_campaign(config, workers=1)
    parallel = run_campaign(config, workers=2)
    assert [r.trajectory for r in serial] == [r.trajectory for r in parallel]


def test_campaign_files(tmp_path):
    out = tmp_path / "c"
    config = preset("emas", "sphere", 5, repetitions=3, output_dir=str(out))
    run_campaign(config)
    rows = read_csv(out / "summary.csv")
    assert [int(r["run"]) for r in rows] == [0, 1, 2]
    for i in range(3):
        traj = read_csv(out / f"run_{i:03d}.csv")
        assert int(traj[-1]["evals"]) == 500
        assert float(traj[-1]["best_fitness"]) == float(rows[i]["final_best"])
    first = (out / "summary.csv").read_bytes()
    run_campaign(config)
    assert (out / "summary.csv").read_bytes() == first


def test_single_rep_summary(tmp_path):
    record = run_single(preset("emas", "ackley", 4), 0)
    d = describe([record.final_best_fitness])
    assert d.mean == d.median == d.min == d.max == record.final_best_fitness


def campaign(label, finals, function="ackley", dim=10):
    return Campaign(label, function, dim, list(finals), list(range(len(finals))))


def test_compare_four_campaigns():
    report = compare_campaigns([campaign(x, [i + 0.1 * j for j in range(5)]) for i, x in enumerate("abcd")])
    assert len(report.pairwise) == 6


def test_compare_self_and_separated():
    same = compare_campaigns([campaign("emas", [1, 2, 3]), campaign("emas", [1, 2, 3])])
    assert same.pair("emas#1", "emas#2").p_unadjusted == 1.0
    apart = compare_campaigns([campaign("lo", range(10)), campaign("hi", range(100, 110))])
    assert apart.pair("lo", "hi").p_unadjusted < 0.05
    assert "*" in render_report(apart)


def test_compare_mixed_instances():
    with pytest.raises(MixedInstances):
        compare_campaigns([campaign("a", [1, 2]), campaign("b", [1, 2], dim=20)])


def test_write_comparison(tmp_path):
    report = compare_campaigns([campaign("a", [1, 2, 3]), campaign("b", [4, 5, 6])])
    write_comparison(tmp_path / "cmp.csv", report)
    rows = read_csv(tmp_path / "cmp.csv")
    assert rows[0]["group_a"] == "a" and rows[0]["group_b"] == "b"
    assert float(rows[0]["p_unadjusted"]) == report.pair("a", "b").p_unadjusted


def test_cli_run_and_compare(tmp_path, capsys):
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["run", "--preset", "emas", "--function", "sphere", "--dim", "3", "--reps", "3", "--out", str(a)]) == 0
    assert main(["run", "--preset", "hemas2", "--function", "sphere", "--dim", "3", "--reps", "3", "--out", str(b)]) == 0
    assert load_campaign(a).label == "emas" and len(load_campaign(b).finals) == 3
    assert main(["compare", str(a), str(b), "--csv", str(tmp_path / "cmp.csv")]) == 0
    assert "Kruskal-Wallis" in capsys.readouterr().out
    assert (tmp_path / "cmp.csv").exists()


def test_cli_config_file_with_overrides(tmp_path):
    path = tmp_path / "c.yaml"
    path.write_text(yaml.safe_dump(preset("hemas1", "sphere", 3, repetitions=5).to_dict()))
    out = tmp_path / "o"
    assert main(["run", "--config", str(path), "--reps", "2", "--dim", "4", "--out", str(out)]) == 0
    saved = yaml.safe_load((out / "config.yaml").read_text())
    assert saved["repetitions"] == 2 and saved["dimension"] == 4


def test_cli_exit_codes(tmp_path, capsys):
    bad = tmp_path / "bad.yaml"
    bad.write_text("algorithm: emas\nfunction: ackley\ndimension: -3\n")
    assert main(["run", "--config", str(bad)]) == 2
    assert main(["run", "--preset", "emas"]) == 2
    assert main(["compare", str(tmp_path / "missing"), str(tmp_path / "gone")]) == 1
    a, b = tmp_path / "a", tmp_path / "b"
    main(["run", "--preset", "emas", "--function", "sphere", "--dim", "2", "--reps", "2", "--out", str(a)])
    main(["run", "--preset", "emas", "--function", "sphere", "--dim", "3", "--reps", "2", "--out", str(b)])
    assert main(["compare", str(a), str(b)]) == 2
    assert "error:" in capsys.readouterr().err


def test_cli_table1(tmp_path):
    args = ["table1", "--dims", "2", "--functions", "sphere", "--presets", "emas,hemas1", "--reps", "2", "--out", str(tmp_path)]
    assert main(args) == 0
    assert (tmp_path / "sphere_2" / "comparison.csv").exists()
