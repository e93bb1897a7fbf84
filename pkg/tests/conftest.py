import pytest

from parserepair.bundled import bundled_text, load_demo_glosses, load_demo_spec
from parserepair.hypgen import TRUE_UNIT, RepairNetworks
from parserepair.repairmem import read_records


@pytest.fixture(scope="session")
def demo_spec():
    return load_demo_spec()


@pytest.fixture(scope="session")
def demo_glosses():
    return load_demo_glosses()


@pytest.fixture()
def demo_records():
    return read_records(bundled_text("demo.records"))


@pytest.fixture()
def scenario_record(demo_records):
    # the worked scheduling example: fragment + three skipped segments
    return demo_records[0]


def scenario_nets(spec) -> RepairNetworks:
    """Nets hand-trained just enough to rank the worked example sanely."""
    nets = RepairNetworks.fresh(spec)
    symbols = {
        "time-phrase",
        "day-of-week-p",
        "time-of-day-p",
        "ordinal-p",
        "v-be",
        "adj-free",
        "pro-i",
        "polarity-p",
        "pro-that",
    }
    nets.symbols_type.train(symbols, "<free>")
    nets.symbols_type.train({"adj-busy", "pro-i"}, "<busy>")
    nets.symbols_sentence_type.train(symbols, "*state")
    for _ in range(3):
        nets.slot_prior.train({TRUE_UNIT}, "*free when")
        nets.slot_filler.train({"*free when"}, "<simple-time>")
    for _ in range(2):
        nets.slot_prior.train({TRUE_UNIT}, "*free who")
        nets.slot_filler.train({"*free who"}, "<i>")
    return nets
