import random

import pytest

from src.heap import Heap
from src.services.bisimulation import BisimReport, lockstep_bisim, relate
from src.services.semantics import Config
from src.syntax import New
from tests.factories import SEC3_LAYOUT, random_program

CORPUS = ["file.shy", "file_fresh.shy", "rec_alloc.shy", "sec3.shy", "shared.shy"]


@pytest.mark.parametrize("name", CORPUS)
def test_corpus_programs_are_bisimilar(corpus, name):
    report = lockstep_bisim(corpus(name), depth=60, trials=10, seed=1)

    assert report.failure is None
    assert report.passed
    assert report.summary == "PASS 10/10"


def test_recursive_allocation_deep_run(corpus):
    report = lockstep_bisim(corpus("rec_alloc.shy"), depth=50, trials=1)
    assert report.passed
    assert report.steps_checked == 50


def test_file_example(corpus):
    assert lockstep_bisim(corpus("file.shy"), depth=30, trials=5).passed


def test_single_global_allocation(program):
    report = lockstep_bisim(program("globals x; locals ; fields ; proc main { x := new }"), depth=5, trials=1)

    assert report.passed
    # terminates after the allocation, nothing left to check
    assert report.steps_checked == 1


def test_parallel_trials_agree_with_sequential(corpus):
    prog = corpus("file_fresh.shy")
    sequential = lockstep_bisim(prog, depth=40, trials=8, seed=3)
    parallel = lockstep_bisim(prog, depth=40, trials=8, seed=3, workers=4)

    assert sequential == parallel


def test_random_programs_are_bisimilar():
    rng = random.Random(2024)
    trials = 0
    for index in range(60):
        prog = random_program(rng, procs=rng.randrange(1, 4), fields=rng.randrange(0, 3))
        report = lockstep_bisim(prog, depth=50, trials=4, seed=index)
        assert report.passed, "\n".join([str(prog.procs)] + report.failure.describe())
        trials += report.trials_run
    assert trials >= 200


def test_relate_detects_diverging_heaps():
    c = Config(Heap.build(SEC3_LAYOUT, {"g": 0}), (New("g"),), 1)
    a = Config(Heap.initial(SEC3_LAYOUT), (New("g"),))
    assert relate(c, a) == "current heaps are not isomorphic"


def test_relate_detects_diverging_statements():
    h = Heap.initial(SEC3_LAYOUT)
    assert relate(Config(h, (New("g"),), 0), Config(h, (New("l"),))) == "frame 0 holds different statements"


def test_failed_report_summary():
    report = BisimReport(passed=False, trials_run=4, trials_passed=3)
    assert report.summary == "FAIL 3/4"
