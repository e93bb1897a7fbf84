import math
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from parserepair.minet import (
    MINetwork,
    ModelFormatError,
    load,
    load_bundle,
    save,
    save_bundle,
)


def net_from_events(events, lam=0.5, name="test"):
    net = MINetwork(name, lam=lam)
    for active, correct in events:
        net.train(active, correct)
    return net


class TestMI:
    def test_hand_computed_table(self):
        # counts: joint(c,v)=3, in(c)=3, out(v)=3, total=9, three outputs
        events = [({"c"}, "v")] * 3 + [((), "w1")] * 3 + [((), "w2")] * 3
        net = net_from_events(events, lam=0.5)
        assert net.total == 9
        assert len(net.outputs) == 3
        assert net.mi("c", "v") == pytest.approx(math.log(7 / 3), abs=1e-12)

    def test_independent_counts_give_zero(self):
        # joint(c,v)=2, in(c)=4, out(v)=5, total=10: P(v|c) = P(v) = 1/2
        events = (
            [({"c"}, "v")] * 2
            + [({"c"}, "x")] * 2
            + [((), "v")] * 3
            + [((), "y")] * 3
        )
        net = net_from_events(events, lam=1e-9)
        assert abs(net.mi("c", "v")) < 1e-6

    def test_unseen_input_is_exactly_zero(self):
        net = net_from_events([({"a"}, "x")] * 5)
        assert net.mi("ghost", "x") == 0.0


class TestPredict:
    def test_skewed_counts_rank_majority_first(self):
        events = [({"free-phrase"}, "<free>")] * 3 + [({"free-phrase"}, "<busy>")]
        net = net_from_events(events)

        # independent recomputation of the scoring formula
        def brute(v, joint, n_in, n_out, total, size, lam=0.5):
            prior = (n_out + lam) / (total + lam * size)
            cond = (joint + lam) / (n_in + lam * size)
            return math.log(prior) + math.log(cond / prior)

        predictions = net.predict({"free-phrase"})
        assert predictions[0].output == "<free>"
        assert predictions[0].score == pytest.approx(brute(0, 3, 4, 3, 4, 2))
        assert predictions[1].score == pytest.approx(brute(0, 1, 4, 1, 4, 2))

    def test_empty_active_ranks_by_prior(self):
        events = [((), "b")] * 3 + [((), "a")] * 3 + [((), "c")]
        net = net_from_events(events)
        assert [p.output for p in net.predict(set())] == ["a", "b", "c"]

    def test_mask_excludes_outputs(self):
        events = [({"s"}, "big")] * 9 + [({"s"}, "small")]
        net = net_from_events(events)
        outputs = [p.output for p in net.predict({"s"}, mask={"small"})]
        assert outputs == ["small"]

    def test_empty_effective_mask(self):
        net = net_from_events([({"s"}, "x")])
        assert net.predict({"s"}, mask={"not-there"}) == []

    def test_ranks_are_one_based_and_ordered(self):
        net = net_from_events([({"s"}, c) for c in "abcab"])
        predictions = net.predict({"s"})
        assert [p.rank for p in predictions] == [1, 2, 3]
        assert all(
            predictions[i].score >= predictions[i + 1].score
            for i in range(len(predictions) - 1)
        )


events_strategy = st.lists(
    st.tuples(
        st.sets(st.sampled_from("abcde"), max_size=3),
        st.sampled_from(["w", "x", "y", "z"]),
    ),
    max_size=60,
)


class TestProperties:
    @given(events_strategy, st.sets(st.sampled_from("abcde"), max_size=3))
    def test_unseen_unit_never_changes_scores(self, events, active):
        net = net_from_events(events)
        before = [(p.output, p.score) for p in net.predict(active)]
        after = [(p.output, p.score) for p in net.predict(active | {"zz-ghost"})]
        assert before == after  # exact float equality

    @given(events_strategy)
    def test_all_unseen_falls_back_to_prior_order(self, events):
        net = net_from_events(events)
        got = [p.output for p in net.predict({"zz-g1", "zz-g2"})]
        want = sorted(net.outputs, key=lambda v: (-net.out_marginal.get(v, 0), v))
        assert got == want

    @given(events_strategy, st.data())
    def test_masking_equals_filtering(self, events, data):
        net = net_from_events(events)
        if not net.outputs:
            return
        mask = data.draw(st.sets(st.sampled_from(sorted(net.outputs)), min_size=1))
        active = data.draw(st.sets(st.sampled_from("abcde"), max_size=3))
        full = net.predict(active)
        masked = net.predict(active, mask=mask)
        assert [(p.output, p.score) for p in masked] == [
            (p.output, p.score) for p in full if p.output in mask
        ]

    @given(events_strategy, st.sets(st.sampled_from("abcde"), min_size=2, max_size=4))
    def test_evidence_is_additive(self, events, active):
        net = net_from_events(events)
        if not net.outputs:
            return
        units = sorted(active)
        half = len(units) // 2
        a1, a2 = set(units[:half]), set(units[half:])
        for v in sorted(net.outputs):
            whole = net.score(active, v) - net.score((), v)
            parts = (net.score(a1, v) - net.score((), v)) + (
                net.score(a2, v) - net.score((), v)
            )
            assert whole == pytest.approx(parts, abs=1e-9)

    @given(events_strategy, st.sets(st.sampled_from("abcde"), max_size=3))
    def test_training_never_worsens_rank(self, events, active):
        net = net_from_events(events)
        net.train(active, "target")
        before = {p.output: p.rank for p in net.predict(active)}["target"]
        net.train(active, "target")
        after = {p.output: p.rank for p in net.predict(active)}["target"]
        assert after <= before

    @given(events_strategy)
    def test_recount_invariants(self, events):
        net = net_from_events(events)
        assert net.total == sum(net.out_marginal.values())
        for c in net.inputs:
            assert net.in_marginal.get(c, 0) == sum(
                count for (ci, _), count in net.joint.items() if ci == c
            )


def exact_scores(net, active):
    """Rational-arithmetic ranking oracle; needs all relevant counts >= 1."""
    scores = {}
    for v in net.outputs:
        prior = Fraction(net.out_marginal[v], net.total)
        value = prior
        for c in active:
            value *= Fraction(net.joint[(c, v)], net.in_marginal[c]) / prior
        scores[v] = value
    return scores


class TestLambdaLimit:
    @given(st.integers(0, 10**6))
    def test_tiny_lambda_matches_rational_oracle(self, seed):
        rng = random.Random(seed)
        inputs, outputs = ["a", "b"], ["x", "y", "z"]
        events = [({c}, v) for c in inputs for v in outputs]  # all cells >= 1
        for _ in range(rng.randint(0, 8)):
            events.append(({rng.choice(inputs)}, rng.choice(outputs)))
        net = net_from_events(events, lam=1e-9)
        active = set(rng.sample(inputs, rng.randint(1, 2)))
        exact = exact_scores(net, active)
        best_exact = max(exact.values())
        got = net.predict(active)
        assert exact[got[0].output] == best_exact
        # order must agree wherever the exact scores are well separated
        for hi, lo in zip(got, got[1:]):
            if exact[hi.output] < exact[lo.output]:
                gap = math.log(exact[lo.output] / exact[hi.output])
                assert gap < 1e-6


class TestPersistence:
    def test_empty_round_trip(self):
        net = MINetwork("n1", lam=0.25)
        assert load(save(net)) == net

    @given(events_strategy)
    def test_random_round_trip(self, events):
        net = net_from_events(events, lam=0.5, name="n-random")
        net.inputs.add("zero-count-unit")  # vocab entries survive without counts
        again = load(save(net))
        assert again == net

    def test_count_matches_training_log(self):
        log = [({"a"}, "x"), ({"a"}, "x"), ({"a", "b"}, "y")]
        net = net_from_events(log)
        text = save(net).decode()
        expected = sum(1 for active, v in log if "a" in active and v == "x")
        assert f"joint\ta\tx\t{expected}" in text

    def test_bundle_round_trip(self):
        nets = {
            "n1": net_from_events([({"a"}, "x")], name="n1"),
            "n2": net_from_events([({"b c"}, "y")] * 2, name="n2", lam=0.1),
        }
        again = load_bundle(save_bundle(nets))
        assert again == nets

    def test_version_mismatch(self):
        bad = save(MINetwork("n")).replace(b"minet\t1", b"minet\t9")
        with pytest.raises(ModelFormatError):
            load(bad)

    def test_corrupt_table(self):
        with pytest.raises(ModelFormatError):
            load(b"minet\t1\nname\tn\njoint\ta\n")

    def test_negative_count_rejected(self):
        text = save(net_from_events([({"a"}, "x")])).decode()
        bad = text.replace("joint\ta\tx\t1", "joint\ta\tx\t-1").encode()
        with pytest.raises(ModelFormatError):
            load(bad)

    def test_garbage_rejected(self):
        with pytest.raises(ModelFormatError):
            load(b"not a model\n")
