import numpy as np
import pytest

from emgctl import EmgRecord, RecordMeta, save_record_file
from emgctl.cli import main, parse_config
from emgctl.errors import ConfigError


def test_parse_config_round_trip():
    schema = {"epochs": int, "learning_rate": float, "seed": int}
    text = "# comment\nepochs = 3\nlearning_rate=0.001\n\nseed=9\n"
    assert parse_config(text, schema) == {"epochs": 3, "learning_rate": 0.001, "seed": 9}


def test_parse_config_rejects_unknown_key():
    with pytest.raises(ConfigError, match="unknown key"):
        parse_config("epochz=3\n", {"epochs": int})
    with pytest.raises(ConfigError):
        parse_config("epochs three\n", {"epochs": int})
    with pytest.raises(ConfigError):
        parse_config("epochs=three\n", {"epochs": int})


@pytest.fixture(scope="module")
def workspace(tmp_path_factory):
    """synth -> train -> weights, shared across the CLI tests."""
    root = tmp_path_factory.mktemp("cli")
    data = root / "data"
    spec_file = root / "synth.cfg"
    spec_file.write_text(
        "subjects=3\ngestures=3\nrepetitions=3\nduration=1.0\nsample_rate=500\n"
        "channels=4\nseed=3\n"
    )
    assert main(["synth", "--spec", str(spec_file), "--out", str(data)]) == 0
    assert len(list(data.glob("*.emg1"))) == 27

    train_cfg = root / "train.cfg"
    train_cfg.write_text(
        "learning_rate=0.003\nbatch_size=32\nepochs=2\ndropout_rate=0.1\nseed=1\n"
    )
    weights = root / "model.emgw"
    rc = main(
        [
            "train", "--data", str(data), "--config", str(train_cfg),
            "--out", str(weights), "--conv-filters", "2", "--dense-units", "4",
            "--window-len", "100", "--stride", "50",
        ]
    )
    assert rc == 0 and weights.exists()
    return root, data, weights


def _flags():
    return [
        "--conv-filters", "2", "--dense-units", "4", "--num-classes", "3",
        "--window-len", "100", "--channels", "4", "--dropout", "0.1",
    ]


def test_train_emits_history_lines(workspace, capsys):
    # rerun a 1-epoch training to capture its stdout
    root, data, _ = workspace
    cfg = root / "one_epoch.cfg"
    cfg.write_text("epochs=1\nbatch_size=64\ndropout_rate=0.1\nseed=2\n")
    out_weights = root / "again.emgw"
    assert main(
        [
            "train", "--data", str(data), "--config", str(cfg), "--out", str(out_weights),
            "--conv-filters", "2", "--dense-units", "4", "--window-len", "100",
            "--stride", "50",
        ]
    ) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0].startswith("epoch,0,train_loss,")
    assert "val_acc," in lines[0]


def test_eval_prints_accuracy_and_confusion(workspace, capsys):
    _, data, weights = workspace
    rc = main(["eval", "--data", str(data), "--weights", str(weights), "--stride", "50", *_flags()])
    assert rc == 0
    out = capsys.readouterr().out
    assert out.startswith("accuracy,")
    assert "Thumb" in out


def test_eval_wrong_width_fails_cleanly(workspace, capsys):
    _, data, weights = workspace
    rc = main(
        ["eval", "--data", str(data), "--weights", str(weights), "--stride", "50",
         "--conv-filters", "3", "--dense-units", "4", "--num-classes", "3",
         "--window-len", "100", "--channels", "4", "--dropout", "0.1"]
    )
    assert rc == 1
    assert "architecture" in capsys.readouterr().err.lower()


def test_stream_writes_hex_frames_and_stats(workspace, tmp_path, capsys):
    _, data, weights = workspace
    record = sorted(data.glob("*.emg1"))[0]
    sink = tmp_path / "commands.txt"
    rc = main(
        ["stream", "--weights", str(weights), "--in", str(record), "--out", str(sink),
         "--fifo", "3", "--rate", "5", *_flags()]
    )
    assert rc == 0
    lines = sink.read_text().strip().splitlines()
    assert lines and all(line.startswith(">A5") and len(line) == 19 for line in lines)
    assert capsys.readouterr().out.startswith("stats,frames,")


def test_stream_determinism(workspace, tmp_path):
    _, data, weights = workspace
    record = sorted(data.glob("*.emg1"))[1]
    sinks = [tmp_path / "a.txt", tmp_path / "b.txt"]
    for sink in sinks:
        assert main(
            ["stream", "--weights", str(weights), "--in", str(record), "--out", str(sink),
             "--rate", "5", *_flags()]
        ) == 0
    assert sinks[0].read_bytes() == sinks[1].read_bytes()


def test_bench_prints_stats_line(workspace, capsys):
    _, _, weights = workspace
    rc = main(["bench", "--weights", str(weights), "--iters", "3", "--threads", "1", *_flags()])
    assert rc == 0
    assert capsys.readouterr().out.startswith("stats,frames,3,")


def test_sweep_error_output(capsys):
    rc = main(["sweep-error", "--rho", "0.1", "--nmax", "3", "--trials", "1000"])
    assert rc == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 2
    assert lines[0].startswith("rho,0.100000,n,1,power_bound,")


def test_stream_reads_raw_bytes_from_stdin(workspace):
    import subprocess
    import sys

    _, data, weights = workspace
    record = sorted(data.glob("*.emg1"))[0]
    cmd = [
        sys.executable, "-m", "emgctl.cli", "stream", "--weights", str(weights),
        "--in", "-", "--out", "-", "--rate", "5", *_flags(),
    ]
    result = subprocess.run(cmd, input=record.read_bytes(), capture_output=True, check=True)
    lines = result.stdout.decode().strip().splitlines()
    assert lines[-1].startswith("stats,frames,")
    assert lines[:-1] and all(l.startswith(">A5") for l in lines[:-1])


def test_unknown_config_key_is_an_error(workspace, tmp_path, capsys):
    _, data, _ = workspace
    bad = tmp_path / "bad.cfg"
    bad.write_text("learning_rte=0.1\n")
    rc = main(["train", "--data", str(data), "--config", str(bad), "--out", str(tmp_path / "w.emgw")])
    assert rc == 1
    assert "unknown key" in capsys.readouterr().err


def test_stream_rejects_wrong_rate(workspace, tmp_path, capsys):
    _, data, weights = workspace
    record = sorted(data.glob("*.emg1"))[0]
    rc = main(
        ["stream", "--weights", str(weights), "--in", str(record),
         "--out", str(tmp_path / "x.txt"), "--rate", "3", *_flags()]
    )
    assert rc == 1
    assert "does not divide" in capsys.readouterr().err
