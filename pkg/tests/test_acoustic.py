import numpy as np
import pytest
import torch

from conftest import make_tiny_model, tiny_acoustic_config
from emotts.acoustic import (
    AcousticConfig,
    AcousticModel,
    decode_mel,
    embed_phonemes,
    encode,
    inject_condition,
    length_regulate,
    load_acoustic,
    predicted_frames,
    save_acoustic,
    variance_adapt,
)
from emotts.corpus import FeatureConfig
from emotts.errors import ShapeError
from emotts.layers import lengths_to_mask


@pytest.fixture(scope="module")
def tiny():
    return make_tiny_model(seed=0).eval()


@pytest.fixture(scope="module")
def full_model():
    torch.manual_seed(0)
    return AcousticModel(AcousticConfig(n_speakers=4)).eval()


class TestConfig:
    def test_defaults_match_training_parameters(self):
        config = AcousticConfig(n_speakers=4)
        assert config.encoder_layers == 4
        assert config.encoder_heads == 2
        assert config.encoder_hidden == 256
        assert config.decoder_layers == 6
        assert config.decoder_heads == 2
        assert config.decoder_hidden == 256
        assert config.variance_filter == 256
        assert config.variance_kernel == 3
        assert config.variance_dropout == 0.5
        assert config.n_emotion == 5

    def test_head_divisibility_enforced(self):
        with pytest.raises(ValueError):
            AcousticConfig(n_speakers=1, encoder_hidden=66, encoder_heads=4)

    def test_multi_emotion_needs_five(self):
        with pytest.raises(ValueError):
            AcousticConfig(n_speakers=1, n_emotion=4)

    def test_layer_counts_from_config(self, full_model):
        assert len(full_model.encoder_blocks) == 4
        assert len(full_model.decoder_blocks) == 6


class TestEmbed:
    def test_eleven_by_256(self, full_model):
        x = embed_phonemes(list(range(3, 14)), full_model)
        assert tuple(x.shape) == (11, 256)

    def test_positional_delta(self, tiny):
        x = embed_phonemes([5, 5], tiny)
        table = tiny.position_table
        assert torch.allclose(x[0] - x[1], table[0] - table[1], atol=1e-6)

    def test_empty(self, tiny):
        x = embed_phonemes([], tiny)
        assert tuple(x.shape) == (0, tiny.config.encoder_hidden)

    def test_out_of_vocabulary_id(self, tiny):
        with pytest.raises(IndexError):
            embed_phonemes([tiny.config.vocab_size + 1], tiny)


class TestEncode:
    @pytest.mark.parametrize("n", [1, 11, 50])
    def test_shape_preserving(self, tiny, n):
        x = embed_phonemes(list(range(3, 3 + n)), tiny)
        assert encode(x, tiny).shape == x.shape

    def test_attention_rows_sum_to_one(self, tiny):
        x = embed_phonemes(list(range(3, 14)), tiny)
        _, attentions = encode(x, tiny, return_attention=True)
        assert len(attentions) == tiny.config.encoder_layers
        for weights in attentions:
            sums = weights.sum(dim=-1)
            assert torch.allclose(sums, torch.ones_like(sums), atol=1e-6)

    def test_batch_permutation_equivariance(self, tiny):
        torch.manual_seed(1)
        batch = torch.randn(3, 7, tiny.config.encoder_hidden)
        out = tiny.encode(batch)
        flipped = tiny.encode(batch.flip(0))
        assert torch.allclose(out.flip(0), flipped, atol=1e-6)


class TestCondition:
    def test_time_constant_additive(self):
        model = make_tiny_model(seed=0).double().eval()
        hidden = encode(embed_phonemes(list(range(3, 14)), model), model)
        conditioned = inject_condition(hidden, 1, 3, model)
        delta = conditioned - hidden
        deviation = (delta - delta[0]).abs().max()
        assert float(deviation) < 1e-9

    def test_relu_kills_all_negative_emotion(self, tiny):
        model = make_tiny_model(seed=2).eval()
        with torch.no_grad():
            model.emotion_linear.weight.zero_()
            model.emotion_linear.bias.fill_(-1.0)
        hidden = encode(embed_phonemes([3, 4, 5], model), model)
        a = inject_condition(hidden, 1, 0, model)
        b = inject_condition(hidden, 1, 3, model)
        assert torch.equal(a, b)

    def test_amused_uses_table_row_zero(self, tiny):
        hidden = torch.zeros(4, tiny.config.encoder_hidden)
        conditioned = inject_condition(hidden, 2, 0, tiny)
        expected = tiny.speaker_emb.weight[2] + torch.relu(
            tiny.emotion_linear(tiny.emotion_emb.weight[0])
        )
        assert torch.allclose(conditioned[0], expected, atol=1e-6)

    def test_distinct_emotions_differ(self, tiny):
        hidden = encode(embed_phonemes([3, 4, 5], tiny), tiny)
        a = inject_condition(hidden, 0, 0, tiny)
        b = inject_condition(hidden, 0, 3, tiny)
        assert not torch.equal(a, b)

    def test_unknown_ids(self, tiny):
        hidden = torch.zeros(2, tiny.config.encoder_hidden)
        with pytest.raises(IndexError):
            inject_condition(hidden, tiny.config.n_speakers + 3, 0, tiny)
        with pytest.raises(IndexError):
            inject_condition(hidden, 0, 7, tiny)


class TestLengthRegulator:
    def test_basic_expansion(self):
        rows = torch.arange(3, dtype=torch.float32)[:, None].repeat(1, 4)
        out, lengths = length_regulate(rows[None], torch.tensor([[2, 0, 3]]))
        assert lengths.tolist() == [5]
        assert out[0, :, 0].tolist() == [0.0, 0.0, 2.0, 2.0, 2.0]

    def test_sum_property(self):
        rng = np.random.default_rng(0)
        for _ in range(200):
            n = int(rng.integers(1, 12))
            durations = torch.tensor(rng.integers(0, 9, size=(1, n)))
            hidden = torch.randn(1, n, 3)
            out, lengths = length_regulate(hidden, durations)
            assert int(lengths[0]) == int(durations.sum())
            assert out.shape[1] == max(1, int(durations.sum().item()))

    def test_shape_error(self):
        with pytest.raises(ShapeError):
            length_regulate(torch.zeros(1, 3, 4), torch.tensor([[1, 2]]))

    def test_inference_duration_rule(self):
        log_two = torch.full((1, 5), float(np.log(2.0)))
        assert predicted_frames(log_two).tolist() == [[1] * 5]
        assert predicted_frames(torch.tensor([[-5.0]])).tolist() == [[0]]


class TestVarianceAdaptor:
    def test_log_two_bias_gives_one_frame_each(self):
        model = make_tiny_model(seed=1).eval()
        with torch.no_grad():
            model.duration_predictor.out.weight.zero_()
            model.duration_predictor.out.bias.fill_(float(np.log(2.0)))
        hidden = encode(embed_phonemes([3, 4, 5, 6], model), model)
        expanded, outputs = variance_adapt(hidden, model)
        assert expanded.shape[0] == 4
        assert torch.allclose(outputs.log_durations, torch.full((4,), float(np.log(2.0))))

    def test_teacher_forced_91_frames(self, tiny):
        hidden = encode(embed_phonemes([3, 4, 5], tiny), tiny)
        conditioned = inject_condition(hidden, 0, 0, tiny)
        expanded, _ = variance_adapt(conditioned, tiny, duration_targets=[57, 24, 10])
        assert expanded.shape[0] == 91

    def test_target_shape_error(self, tiny):
        hidden = encode(embed_phonemes([3, 4, 5], tiny), tiny)
        with pytest.raises(ShapeError):
            variance_adapt(hidden, tiny, duration_targets=[1, 2])

    def test_variance_outputs_per_phoneme(self, tiny):
        hidden = encode(embed_phonemes(list(range(3, 10)), tiny), tiny)
        _, outputs = variance_adapt(hidden, tiny)
        assert outputs.log_durations.shape == (7,)
        assert outputs.pitch.shape == (7,)
        assert outputs.energy.shape == (7,)


class TestDecode:
    @pytest.mark.parametrize("frames", [1, 13, 40])
    def test_output_shapes(self, tiny, frames):
        hidden = torch.randn(frames, tiny.config.decoder_hidden)
        before, after = decode_mel(hidden, tiny)
        assert before.shape == (frames, tiny.config.n_mels)
        assert after.shape == (frames, tiny.config.n_mels)

    def test_zero_postnet_is_identity(self):
        model = make_tiny_model(seed=3).eval()
        with torch.no_grad():
            for conv in model.postnet.convs:
                conv.weight.zero_()
                conv.bias.zero_()
        hidden = torch.randn(9, model.config.decoder_hidden)
        before, after = decode_mel(hidden, model)
        assert torch.equal(before, after)


class TestMaskingAndDeterminism:
    def test_batched_matches_single(self, tiny):
        torch.manual_seed(5)
        ids_a = torch.tensor([3, 4, 5, 6, 7])
        ids_b = torch.tensor([10, 11])
        batch_ids = torch.zeros(2, 5, dtype=torch.long)
        batch_ids[0] = ids_a
        batch_ids[1, :2] = ids_b
        lengths = torch.tensor([5, 2])
        speakers = torch.tensor([0, 1])
        emotions = torch.tensor([2, 4])
        durations = torch.tensor([[2, 3, 1, 2, 2], [3, 2, 0, 0, 0]])
        with torch.no_grad():
            batched = tiny(batch_ids, lengths, speakers, emotions, durations)
            single = tiny(
                ids_b[None], torch.tensor([2]), torch.tensor([1]), torch.tensor([4]),
                torch.tensor([[3, 2]]),
            )
        t = int(single["mel_lengths"][0])
        assert int(batched["mel_lengths"][1]) == t
        diff = (batched["mel_after"][1, :t] - single["mel_after"][0, :t]).abs().max()
        assert float(diff) < 1e-6

    def test_eval_determinism_bit_identical(self, tiny):
        ids = torch.tensor([[3, 9, 27, 40]])
        args = (ids, torch.tensor([4]), torch.tensor([1]), torch.tensor([2]))
        with torch.no_grad():
            torch.manual_seed(11)
            a = tiny(*args)["mel_after"]
            torch.manual_seed(11)
            b = tiny(*args)["mel_after"]
        assert torch.equal(a, b)

    def test_lengths_to_mask(self):
        mask = lengths_to_mask(torch.tensor([3, 1]), 4)
        assert mask.tolist() == [
            [False, False, False, True],
            [False, True, True, True],
        ]


class TestCheckpoint:
    def test_round_trip(self, tiny, tmp_path):
        path = tmp_path / "acoustic.ckpt"
        save_acoustic(path, tiny, {"bea": 0, "sam": 1}, FeatureConfig())
        loaded, speakers, feature_config = load_acoustic(path)
        assert speakers == {"bea": 0, "sam": 1}
        assert feature_config == FeatureConfig()
        assert loaded.config == tiny.config
        assert loaded.stats == tiny.stats
        for key, value in tiny.state_dict().items():
            assert torch.equal(loaded.state_dict()[key], value)
