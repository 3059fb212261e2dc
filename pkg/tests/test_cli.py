import json
import math

import numpy as np
import pytest

from lambda_jcm import ConfigParseError, Harmonious, Identity, Motion, TrappedIon
from lambda_jcm.cli import (
    CSV_COLUMNS,
    build_config,
    emit_csv,
    emit_plot,
    expand_sweep,
    main,
    parse_config,
    parse_document,
    run,
    write_metadata,
)

LN3 = math.log(3.0)


def read_csv(path):
    lines = path.read_text(encoding="utf-8").splitlines()
    header = lines[0].split(",")
    rows = [line.split(",") for line in lines[1:]]
    return header, rows


class TestParse:
    def test_empty_document_gives_figure_defaults(self):
        config = parse_config("")
        assert abs(config.params.alpha) ** 2 == pytest.approx(10.0, rel=1e-12)
        assert config.params.p == 1
        assert isinstance(config.params.nonlinearity, Identity)
        assert config.params.motion is Motion.MOVING
        assert (config.tau_start, config.tau_end, config.tau_step) == (0.0, 30.0, 0.01)
        assert config.observables == ("entropy", "entropy_squeezing", "mandel", "quadrature")
        assert len(config.tau_grid()) == 3001

    def test_comments_and_blank_lines(self):
        config = parse_config("# a comment\n\nalpha_sq = 4  # trailing\n")
        assert abs(config.params.alpha) ** 2 == pytest.approx(4.0)

    def test_zero_p_with_moving_atom_rejected(self):
        with pytest.raises(ConfigParseError, match=r"key 'p' \(line 1\)"):
            parse_config("p = 0\n")

    def test_nonlinearity_mapping(self):
        assert isinstance(parse_config("nonlinearity = harmonious").params.nonlinearity, Harmonious)
        config = parse_config("nonlinearity = trapped_ion\neta = 0.4")
        assert config.params.nonlinearity == TrappedIon(0.4)

    def test_unknown_key_names_line(self):
        with pytest.raises(ConfigParseError, match="line 2: unknown key 'frequency'"):
            parse_config("alpha_sq = 1\nfrequency = 3\n")

    def test_bad_number_names_key(self):
        with pytest.raises(ConfigParseError, match="tau_step"):
            parse_config("tau_step = fast\n")

    def test_time_window_must_be_ordered(self):
        with pytest.raises(ConfigParseError, match="tau_end"):
            parse_config("tau_start = 5\ntau_end = 5\n")

    def test_unknown_observable_rejected(self):
        with pytest.raises(ConfigParseError, match="wigner"):
            parse_config("observables = entropy,wigner\n")

    def test_custom_requires_table(self):
        with pytest.raises(ConfigParseError, match="custom_g"):
            parse_config("nonlinearity = custom\n")
        config = parse_config("nonlinearity = custom\ncustom_g = " + ",".join(["1"] * 130))
        assert config.params.nonlinearity.values[0] == 1.0

    def test_alpha_phase_sets_complex_amplitude(self):
        config = parse_config(f"alpha_sq = 4\nalpha_phase = {math.pi / 2}\n")
        assert config.params.alpha == pytest.approx(2.0j, abs=1e-12)

    def test_flag_style_entries_override(self):
        entries = parse_document("alpha_sq = 4\n")
        entries["alpha_sq"] = ("9", None)  # flags carry no line number
        config = build_config(entries)
        assert abs(config.params.alpha) ** 2 == pytest.approx(9.0)

    def test_resolved_n_max_echoed(self):
        config = parse_config("alpha_sq = 4\nn_max = 0\n")
        assert config.settings["n_max"] == str(config.params.n_max)
        assert config.params.n_max > 0


class TestRun:
    def test_single_point_entropy(self):
        config = parse_config(
            "alpha_sq = 4\ntau_start = 0\ntau_end = 1\ntau_step = 2\nobservables = entropy\n"
        )
        series = run(config)
        assert list(series.tau) == [0.0]
        assert series.S_F == [pytest.approx(0.0, abs=1e-10)]
        assert series.Q is None and series.V_x is None

    def test_revival_sample(self):
        tau_rev = 2 * math.pi
        config = parse_config(
            f"alpha_sq = 4\ntau_start = {tau_rev}\ntau_end = {tau_rev + 1}\n"
            "tau_step = 2\nobservables = entropy\n"
        )
        assert run(config).S_F[0] <= 1e-6

    def test_emitted_values_within_physical_ranges(self):
        config = parse_config(
            "alpha_sq = 4\ntau_end = 3\ntau_step = 0.25\n"
            "observables = entropy,entropy_squeezing,mandel,quadrature\n"
        )
        series = run(config)
        assert all(0.0 <= s <= LN3 + 1e-9 for s in series.S_F)
        for column in (series.bigE_x, series.bigE_p, series.V_x, series.V_p):
            assert all(v >= -1.0 for v in column)

    def test_mandel_undefined_at_vacuum(self):
        config = parse_config(
            "alpha_sq = 0\ntau_end = 1\ntau_step = 0.5\nobservables = mandel\n"
        )
        series = run(config)
        assert series.Q[0] is None
        assert all(q is not None for q in series.Q[1:])


class TestEmit:
    def make_series(self, text="alpha_sq = 4\ntau_end = 1\ntau_step = 0.5\nobservables = entropy,mandel\n"):
        return run(parse_config(text))

    def test_header_and_row_count(self, tmp_path):
        series = self.make_series("alpha_sq = 4\ntau_end = 1\ntau_step = 2\nobservables = entropy\n")
        out = tmp_path / "one.csv"
        emit_csv(series, out)
        text = out.read_text(encoding="utf-8")
        assert text == "tau,S_F\n0,0\n" or text.startswith("tau,S_F\n0,")
        assert len(text.splitlines()) == 2
        assert "\r" not in text

    def test_column_order_matches_contract(self, tmp_path):
        series = run(parse_config("alpha_sq = 4\ntau_end = 1\ntau_step = 1\n"))
        out = tmp_path / "all.csv"
        emit_csv(series, out)
        header, _ = read_csv(out)
        assert header == list(CSV_COLUMNS)

    def test_round_trip_precision(self, tmp_path):
        series = self.make_series()
        out = tmp_path / "round.csv"
        emit_csv(series, out)
        header, rows = read_csv(out)
        for i, row in enumerate(rows):
            parsed = dict(zip(header, row))
            assert float(parsed["tau"]) == pytest.approx(float(series.tau[i]), rel=1e-11)
            assert float(parsed["S_F"]) == pytest.approx(series.S_F[i], rel=1e-11, abs=1e-11)

    def test_na_sentinel_appears_verbatim(self, tmp_path):
        series = run(
            parse_config("alpha_sq = 0\ntau_end = 1\ntau_step = 0.5\nobservables = mandel\n")
        )
        out = tmp_path / "na.csv"
        emit_csv(series, out)
        assert out.read_text(encoding="utf-8").splitlines()[1].endswith(",NA")

    def test_deterministic_bytes(self, tmp_path):
        text = "alpha_sq = 4\ntau_end = 2\ntau_step = 0.5\nobservables = entropy,quadrature\n"
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        emit_csv(run(parse_config(text)), a)
        emit_csv(run(parse_config(text)), b)
        assert a.read_bytes() == b.read_bytes()

    def test_metadata_sidecar(self, tmp_path):
        series = self.make_series()
        out = tmp_path / "meta.csv"
        emit_csv(series, out)
        sidecar = write_metadata(series, out)
        payload = json.loads(sidecar.read_text(encoding="utf-8"))
        assert payload["settings"]["alpha_sq"] == "4"
        assert payload["samples"] == len(series.tau)

    def test_plot_per_observable(self, tmp_path):
        series = self.make_series()
        paths = emit_plot(series, tmp_path / "plots.csv")
        assert sorted(p.name for p in paths) == ["plots_entropy.svg", "plots_mandel.svg"]
        assert all(p.exists() for p in paths)

    def test_no_observables_no_plots(self, tmp_path):
        series = run(parse_config("alpha_sq = 4\ntau_end = 1\ntau_step = 0.5\nobservables =\n"))
        assert emit_plot(series, tmp_path / "none.csv") == []
        out = tmp_path / "none.csv"
        emit_csv(series, out)
        assert out.read_text(encoding="utf-8").splitlines()[0] == "tau"


class TestSweep:
    def test_no_sweep_is_identity(self):
        config = parse_config("alpha_sq = 4\n")
        assert expand_sweep(config) == [config]

    def test_sweep_expands_outputs_and_params(self):
        config = parse_config("alpha_sq = 4\nsweep_p = 1,2,3\noutput = runs/out.csv\n")
        expanded = expand_sweep(config)
        assert [cfg.params.p for cfg in expanded] == [1, 2, 3]
        assert [cfg.output for cfg in expanded] == [
            "runs/out_p1.csv",
            "runs/out_p2.csv",
            "runs/out_p3.csv",
        ]
        assert all(cfg.sweep_p == () for cfg in expanded)
        assert [cfg.settings["p"] for cfg in expanded] == ["1", "2", "3"]


class TestMain:
    def test_end_to_end_with_config_file(self, tmp_path, monkeypatch):
        monkeypatch.chdir(tmp_path)
        cfg = tmp_path / "run.cfg"
        cfg.write_text(
            "alpha_sq = 4\ntau_end = 1\ntau_step = 0.5\nobservables = entropy\n"
            "output = series.csv\nplot = true\n",
            encoding="utf-8",
        )
        assert main(["--config", str(cfg)]) == 0
        assert (tmp_path / "series.csv").exists()
        assert (tmp_path / "series.meta.json").exists()
        assert (tmp_path / "series_entropy.svg").exists()

    def test_flags_override_file(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("alpha_sq = 4\ntau_end = 1\ntau_step = 0.5\nobservables = entropy\n")
        out = tmp_path / "flagged.csv"
        assert main(["--config", str(cfg), "--tau_step", "1", "--output", str(out)]) == 0
        _, rows = read_csv(out)
        assert len(rows) == 2  # tau = 0, 1

    def test_sweep_writes_one_file_per_value(self, tmp_path):
        out = tmp_path / "sw.csv"
        code = main(
            [
                "--alpha_sq", "4", "--tau_end", "1", "--tau_step", "0.5",
                "--observables", "entropy", "--sweep_p", "1,2", "--output", str(out),
            ]
        )
        assert code == 0
        for p in (1, 2):
            csv = tmp_path / f"sw_p{p}.csv"
            meta = tmp_path / f"sw_p{p}.meta.json"
            assert csv.exists()
            assert json.loads(meta.read_text())["settings"]["p"] == str(p)

    def test_verify_flag_passes_on_sane_run(self, tmp_path, capsys):
        out = tmp_path / "v.csv"
        code = main(
            [
                "--alpha_sq", "2", "--tau_end", "2", "--tau_step", "1",
                "--observables", "entropy", "--output", str(out), "--verify",
            ]
        )
        assert code == 0
        lines = [l for l in capsys.readouterr().out.splitlines() if l.startswith("verify")]
        assert len(lines) == 5 and all("[ok]" in l for l in lines)

    def test_parse_error_exits_nonzero(self, tmp_path, capsys):
        assert main(["--p", "0", "--output", str(tmp_path / "x.csv")]) == 2
        assert "key 'p'" in capsys.readouterr().err

    def test_missing_config_file_reports_cleanly(self, tmp_path, capsys):
        assert main(["--config", str(tmp_path / "absent.cfg")]) == 2
        assert "cannot read config file" in capsys.readouterr().err
