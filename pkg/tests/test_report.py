"""Figure rendering from sweep records."""
import pytest

from agssl import ExperimentConfig, sweep
from agssl.report import render_sweep_figures


def records_for(sampler, budgets=(1, 2, 3), trials=2):
    cfg = ExperimentConfig(dataset="karate", regularizer_kind="L",
                           budgets=budgets, sampler=sampler, trials=trials,
                           seed=0)
    return sweep(cfg)


class TestRenderSweepFigures:
    def test_writes_loss_and_accuracy_pngs(self, tmp_path):
        paths = render_sweep_figures(records_for("greedy"), tmp_path)
        assert [p.name for p in paths] == ["karate_L_loss.png",
                                           "karate_L_accuracy.png"]
        for p in paths:
            assert p.exists()
            assert p.stat().st_size > 1000
            assert p.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"

    def test_combined_samplers_on_one_axis(self, tmp_path):
        records = records_for("greedy") + records_for("random")
        paths = render_sweep_figures(records, tmp_path)
        assert all(p.exists() for p in paths)

    def test_custom_prefix(self, tmp_path):
        paths = render_sweep_figures(records_for("greedy"), tmp_path,
                                     prefix="run7")
        assert [p.name for p in paths] == ["run7_loss.png",
                                           "run7_accuracy.png"]

    def test_creates_missing_directory(self, tmp_path):
        target = tmp_path / "a" / "b"
        paths = render_sweep_figures(records_for("greedy"), target)
        assert target.is_dir()
        assert all(p.parent == target for p in paths)

    def test_empty_records_rejected(self, tmp_path):
        with pytest.raises(ValueError, match="no records"):
            render_sweep_figures([], tmp_path)

    def test_prefix_uses_dataset_file_stem(self, tmp_path):
        records = records_for("greedy", budgets=(1,))
        relabeled = [type(r)(**{**r.__dict__, "dataset": "/data/my_net.edges"})
                     for r in records]
        paths = render_sweep_figures(relabeled, tmp_path)
        assert paths[0].name == "my_net_L_loss.png"
