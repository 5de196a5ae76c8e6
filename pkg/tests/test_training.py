import json
import math

import numpy as np
import pytest
import torch

from conftest import make_tiny_model
from emotts.errors import DataError, NonFiniteLoss, ShapeError
from emotts.training import (
    LossBreakdown,
    OptimizerConfig,
    l1_loss,
    log_duration_targets,
    lr_at,
    mse_loss,
    total_loss,
    train_acoustic,
)


class TestElementaryLosses:
    def test_l1_hand_value(self):
        assert float(l1_loss([1.0, 3.0], [2.0, 5.0])) == pytest.approx(1.5, abs=1e-12)

    def test_mse_hand_value(self):
        assert float(mse_loss([1.0, 3.0], [2.0, 5.0])) == pytest.approx(2.5, abs=1e-12)

    def test_identity_zero(self):
        x = torch.randn(4, 3)
        assert float(l1_loss(x, x)) == 0.0
        assert float(mse_loss(x, x)) == 0.0

    def test_sign_symmetry(self):
        a, b = torch.randn(5), torch.randn(5)
        assert float(l1_loss(a, b)) == pytest.approx(float(l1_loss(b, a)), rel=1e-12)
        assert float(mse_loss(a, b)) == pytest.approx(float(mse_loss(b, a)), rel=1e-12)

    def test_mse_quadratic_homogeneity(self):
        a, b = torch.randn(6), torch.zeros(6)
        assert float(mse_loss(2 * a, b)) == pytest.approx(4 * float(mse_loss(a, b)), rel=1e-6)

    def test_shape_error(self):
        with pytest.raises(ShapeError):
            l1_loss(torch.zeros(3), torch.zeros(4))
        with pytest.raises(ShapeError):
            mse_loss(torch.zeros(2, 3), torch.zeros(3, 2))

    def test_masking_excludes_padding(self):
        pred = torch.tensor([[1.0, 2.0, 99.0]])
        truth = torch.tensor([[2.0, 4.0, -99.0]])
        pad = torch.tensor([[False, False, True]])
        masked = float(l1_loss(pred, truth, pad))
        assert masked == pytest.approx(1.5)
        pred2 = pred.clone()
        pred2[0, 2] = 12345.0
        assert float(l1_loss(pred2, truth, pad)) == masked


class TestTotalLoss:
    def _outputs_targets(self, rng, equal=False):
        frames, phones, mels = 6, 3, 4
        mel_pred = torch.tensor(rng.normal(size=(1, frames, mels)))
        outputs = {
            "mel_before": mel_pred,
            "mel_after": mel_pred if equal else torch.tensor(rng.normal(size=(1, frames, mels))),
            "pitch": torch.tensor(rng.normal(size=(1, phones))),
            "energy": torch.tensor(rng.normal(size=(1, phones))),
            "log_durations": torch.tensor(rng.normal(size=(1, phones))),
            "mel_pad_mask": None,
            "src_pad_mask": None,
        }
        durations = torch.tensor(rng.integers(1, 4, size=(1, phones)))
        targets = {
            "mel": mel_pred.clone() if equal else torch.tensor(rng.normal(size=(1, frames, mels))),
            "duration_frames": durations,
            "pitch": outputs["pitch"].clone() if equal else torch.tensor(rng.normal(size=(1, phones))),
            "energy": outputs["energy"].clone() if equal else torch.tensor(rng.normal(size=(1, phones))),
        }
        if equal:
            outputs["log_durations"] = log_duration_targets(durations)
        return outputs, targets

    def test_all_zero_when_outputs_equal_targets(self):
        rng = np.random.default_rng(0)
        outputs, targets = self._outputs_targets(rng, equal=True)
        breakdown = total_loss(outputs, targets)
        for value in breakdown.to_floats().values():
            assert value == 0.0

    def test_total_is_component_sum(self):
        rng = np.random.default_rng(1)
        for _ in range(100):
            outputs, targets = self._outputs_targets(rng)
            b = total_loss(outputs, targets)
            parts = float(b.mel + b.postnet_mel + b.pitch + b.energy + b.duration)
            assert float(b.total) == pytest.approx(parts, rel=1e-12)
            assert all(v >= 0 for v in b.to_floats().values())

    def test_fixed_component_sum(self):
        values = [torch.tensor(v) for v in (0.1, 0.1, 0.2, 0.3, 0.3)]
        breakdown = LossBreakdown(*values, total=sum(values))
        assert float(breakdown.total) == pytest.approx(1.0, rel=1e-12)

    def test_duration_loss_in_log_domain(self):
        frames = torch.tensor([[3.0, 7.0]])
        doubled = torch.tensor([[6.0, 14.0]])
        pred = log_duration_targets(frames)
        loss_same = float(mse_loss(pred, log_duration_targets(frames)))
        loss_doubled = float(mse_loss(pred, log_duration_targets(doubled)))
        by_hand = float(np.mean((np.log1p([3.0, 7.0]) - np.log1p([6.0, 14.0])) ** 2))
        assert loss_same == 0.0
        assert loss_doubled == pytest.approx(by_hand, rel=1e-9)


class TestSchedule:
    def test_warmup_step_value(self):
        config = OptimizerConfig()
        assert lr_at(4000, config) == pytest.approx(9.882117688026186e-4, rel=1e-9)

    def test_anneal_factor(self):
        config = OptimizerConfig()
        plain = 256 ** -0.5 * 450000 ** -0.5
        assert lr_at(450000, config) == pytest.approx(plain * 0.09, rel=1e-12)

    def test_monotone_warmup_then_nonincreasing(self):
        config = OptimizerConfig()
        values = [lr_at(step, config) for step in range(1, 4001)]
        assert all(b > a for a, b in zip(values, values[1:]))
        after = [lr_at(step, config) for step in (4000, 5000, 10_000, 300_000, 300_001)]
        assert all(b <= a for a, b in zip(after, after[1:]))

    def test_positive_everywhere(self):
        config = OptimizerConfig()
        for step in (1, 7, 4000, 600_000):
            assert lr_at(step, config) > 0

    def test_validation(self):
        with pytest.raises(ValueError):
            OptimizerConfig(warmup=0)
        with pytest.raises(ValueError):
            OptimizerConfig(anneal_steps=(5, 5, 6))
        with pytest.raises(ValueError):
            lr_at(0, OptimizerConfig())


def reference_adam(params, grads_fn, steps, lr, betas=(0.9, 0.98), eps=1e-9):
    """Textbook Adam on a numpy parameter vector."""
    theta = params.astype(np.float64).copy()
    m = np.zeros_like(theta)
    v = np.zeros_like(theta)
    b1, b2 = betas
    for t in range(1, steps + 1):
        g = grads_fn(theta)
        m = b1 * m + (1 - b1) * g
        v = b2 * v + (1 - b2) * g * g
        m_hat = m / (1 - b1 ** t)
        v_hat = v / (1 - b2 ** t)
        theta = theta - lr * m_hat / (np.sqrt(v_hat) + eps)
    return theta


class TestAdamOracle:
    def test_matches_reference_on_three_params(self):
        target = np.array([1.5, -2.0, 0.5])

        def grads(theta):
            return 2.0 * (theta - target)

        start = np.array([0.0, 0.0, 0.0])
        expected = reference_adam(start, grads, steps=100, lr=1e-2)

        torch.set_default_dtype(torch.float64)
        try:
            theta = torch.nn.Parameter(torch.zeros(3))
            optimizer = torch.optim.Adam([theta], lr=1e-2, betas=(0.9, 0.98), eps=1e-9)
            for _ in range(100):
                optimizer.zero_grad()
                loss = ((theta - torch.tensor(target)) ** 2).sum()
                loss.backward()
                optimizer.step()
        finally:
            torch.set_default_dtype(torch.float32)
        assert np.allclose(theta.detach().numpy(), expected, atol=1e-12)


class TestGradientClipping:
    def test_norm_ten_clipped_to_one(self):
        param = torch.nn.Parameter(torch.zeros(4))
        param.grad = torch.full((4,), 5.0)  # norm 10
        assert float(param.grad.norm()) == pytest.approx(10.0)
        torch.nn.utils.clip_grad_norm_([param], max_norm=1.0)
        assert float(param.grad.norm()) == pytest.approx(1.0, rel=1e-6)


class TestTrainLoop:
    def test_empty_dataset(self):
        with pytest.raises(DataError):
            train_acoustic([], make_tiny_model())

    def test_short_run_decreases_and_logs(self, toy_dataset, tmp_path):
        model = make_tiny_model(seed=0)
        config = OptimizerConfig(batch_size=2, warmup=100)
        result = train_acoustic(
            toy_dataset[:2], model, config, steps=40, seed=0, out_dir=tmp_path
        )
        assert len(result.history) == 40
        assert result.history[-1]["total"] < result.history[0]["total"]
        assert (tmp_path / "acoustic.ckpt").exists()

        log_lines = (tmp_path / "train_log.jsonl").read_text().splitlines()
        assert len(log_lines) == 40
        for line in log_lines:
            entry = json.loads(line)
            parts = (
                entry["mel"] + entry["postnet_mel"] + entry["pitch"]
                + entry["energy"] + entry["duration"]
            )
            assert entry["total"] == pytest.approx(parts, rel=1e-9)
            assert entry["lr"] > 0

    def test_seeded_determinism(self, toy_dataset):
        histories = []
        for _ in range(2):
            model = make_tiny_model(seed=4)
            config = OptimizerConfig(batch_size=2, warmup=100)
            result = train_acoustic(toy_dataset[:2], model, config, steps=10, seed=4)
            histories.append([h["total"] for h in result.history])
        assert histories[0] == histories[1]

    def test_nonfinite_loss_aborts_with_dump(self, toy_dataset, tmp_path):
        model = make_tiny_model(seed=0)
        with torch.no_grad():
            model.mel_linear.weight[0, 0] = float("nan")
        with pytest.raises(NonFiniteLoss):
            train_acoustic(
                toy_dataset[:1], model, OptimizerConfig(batch_size=1),
                steps=3, out_dir=tmp_path,
            )
        dump = json.loads((tmp_path / "nonfinite_dump.json").read_text())
        assert dump["step"] == 1
        assert not math.isfinite(dump["losses"]["total"])
