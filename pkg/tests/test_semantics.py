import random

import pytest

from src.exceptions import IsomorphismError
from src.heap import BOT, Heap, Renaming, all_reachable, apply_renaming, visible_size
from src.services.interpreter import Scheduler
from src.services.semantics import (
    AbstractSemantics, ConcreteSemantics, Config, abstract_step, bind_cut_points, call_heap,
    concrete_step, cp_identification, fresh_min, is_proper, lemma_holds, return_combine,
)
from src.syntax import Call, Choice, FieldWrite, GuardEq, New, Seq, VarCopy
from tests.factories import SEC3_LAYOUT, random_program


@pytest.fixture
def prog(corpus):
    return corpus("sec3.shy")


# --- Heap operations ---

def test_fresh_min(sec3):
    assert fresh_min(sec3["H2"]) == 0
    assert fresh_min(sec3["H3"]) == 2
    assert fresh_min(Heap.initial(SEC3_LAYOUT)) == 0


def test_call_heap_binds_cut_points(sec3):
    assert call_heap(sec3["H1"]) == sec3["H2"]


def test_call_heap_without_cut_points():
    h = Heap.build(SEC3_LAYOUT, {"l": 0, "g": 1})
    entered = call_heap(h)

    assert entered.get("l") is BOT
    assert entered.cut_variables == ()


def test_cut_points_bound_in_discovery_order():
    layout = SEC3_LAYOUT
    # l -> 0 -f-> 2 (= g), g -f-> 5, and 5 is only reachable from g
    h = Heap.build(layout, {"l": 0, "g": 2}, {"f": {0: 2, 2: 5}})
    assert bind_cut_points(h).get("c0") == 2
    assert bind_cut_points(h).get("c1") is BOT


def test_return_after_allocation(sec3):
    assert return_combine(sec3["H3"], sec3["H1"]) == sec3["H4"]


def test_return_without_allocation(sec3):
    assert return_combine(sec3["H2"], sec3["H1"]) == sec3["H1"]


def test_return_after_two_allocations(sec3):
    hc = Heap.build(SEC3_LAYOUT, {"g": 2, "c0": 1})
    assert return_combine(hc, sec3["H1"]) == sec3["H4"]


def test_lemma_holds_at_return(sec3):
    assert lemma_holds(sec3["H3"], sec3["H1"])


# --- Properness and cut point identification ---

def test_single_heap_is_proper(sec3):
    assert is_proper([sec3["H1"]])


def test_caller_local_objects_must_stay_hidden(sec3):
    assert not is_proper([sec3["H1"], sec3["H1"]])


def test_concrete_callee_heap_is_proper(sec3):
    # the concrete callee keeps 0 -f-> 1 around, unreachable
    callee = Heap.build(SEC3_LAYOUT, {"g": 2, "c0": 1}, {"f": {0: 1}})
    assert is_proper([callee, sec3["H1"]])
    assert not is_proper([sec3["H3"], sec3["H1"]])


def test_cp_identification_with_identical_heaps(sec3):
    assert cp_identification(sec3["H2"], sec3["H1"], sec3["H2"], sec3["H1"])


def test_cp_identification_with_renamed_heaps(sec3):
    rho = Renaming(((1, 9),))
    renamed = apply_renaming(rho, sec3["H2"]), apply_renaming(rho, sec3["H1"])
    assert cp_identification(sec3["H2"], sec3["H1"], *renamed)


def test_cp_identification_missing_cut_variable(sec3):
    dropped = sec3["H2"].assign({"c0": BOT})
    assert not cp_identification(dropped, sec3["H1"], sec3["H2"], sec3["H1"])


def test_cp_identification_requires_isomorphic_callers(sec3):
    with pytest.raises(IsomorphismError):
        cp_identification(sec3["H2"], sec3["H1"], sec3["H2"], sec3["H4"])


def test_cp_identification_cut_variable_on_another_object(sec3):
    renamed_caller = apply_renaming(Renaming(((1, 9),)), sec3["H1"])
    assert not cp_identification(sec3["H2"], sec3["H1"], sec3["H2"], renamed_caller)


def test_cp_identification_requires_isomorphic_callees(sec3):
    # c0 matches on both sides but g does not
    detached = Heap.build(SEC3_LAYOUT, {"c0": 1})
    with pytest.raises(IsomorphismError):
        cp_identification(sec3["H2"], sec3["H1"], detached, sec3["H1"])


def test_cp_identification_checks_callees_without_cut_points(sec3):
    empty = Heap.initial(SEC3_LAYOUT)
    assert cp_identification(sec3["H1"], empty, sec3["H1"], empty)
    with pytest.raises(IsomorphismError):
        cp_identification(sec3["H1"], empty, sec3["H4"], empty)


# --- Transitions ---

def test_concrete_new_uses_the_counter(prog, sec3):
    (successor,) = concrete_step(Config(sec3["H1"], (New("g"),), 7), prog)

    assert successor.current.get("g") == 7
    assert successor.current.deref("f", 7) is BOT
    assert successor.counter == 8
    assert successor.stack == ()


def test_sequence_pushes_both_parts(prog, sec3):
    stmt = Seq(New("g"), Call("p"))
    assert abstract_step(Config(sec3["H1"], (stmt,)), prog) == (Config(sec3["H1"], (New("g"), Call("p"))),)


def test_failed_guard_is_stuck(prog, sec3):
    guard = GuardEq("l", "g", VarCopy("l", "nil"))
    assert abstract_step(Config(sec3["H1"], (guard,)), prog) == ()


def test_null_write_is_stuck(prog, sec3):
    assert concrete_step(Config(sec3["H2"], (FieldWrite("l", "f", "g"),), 0), prog) == ()


def test_choice_has_two_ordered_successors(prog, sec3):
    steps = AbstractSemantics(prog).transitions(Config(sec3["H1"], (Choice(New("g"), Call("p")),)))

    assert [s.rule for s in steps] == ["choice", "choice"]
    assert [s.config.top for s in steps] == [New("g"), Call("p")]


def test_abstract_call_saves_the_caller(prog, sec3):
    (successor,) = abstract_step(Config(sec3["H1"], (Call("p"),)), prog)
    assert successor == Config(sec3["H2"], (New("g"), sec3["H1"]))


def test_abstract_new_in_callee(prog, sec3):
    (successor,) = abstract_step(Config(sec3["H2"], (New("g"), sec3["H1"])), prog)
    assert successor == Config(sec3["H3"], (sec3["H1"],))


def test_abstract_return(prog, sec3):
    (successor,) = abstract_step(Config(sec3["H3"], (sec3["H1"],)), prog)
    assert successor == Config(sec3["H4"], ())


def test_abstract_allocation_reuses_identities(program):
    prog = program("globals g; locals ; fields ; proc main { g := new; g := new; g := new }")
    concrete, abstract = ConcreteSemantics(prog), AbstractSemantics(prog)

    def final(semantics):
        c = semantics.initial()
        while c.stack:
            (c,) = semantics.step(c)
        return c

    assert final(concrete).current.get("g") == 2
    assert final(abstract).current.get("g") == 0


def test_terminal_configuration_has_no_successors(prog, sec3):
    assert ConcreteSemantics(prog).step(Config(sec3["H4"], (), 3)) == ()


# --- Properties of abstract runs ---

def abstract_run(prog, seed: int, steps: int = 60):
    """Configurations visited by one seeded abstract run."""
    semantics = AbstractSemantics(prog)
    scheduler = Scheduler(seed)
    c = semantics.initial()
    visited = [c]
    for _ in range(steps):
        options = semantics.transitions(c)
        if not options:
            break
        c = options[scheduler.pick(len(options))].config
        visited.append(c)
    return visited


@pytest.fixture(scope="module")
def random_runs():
    rng = random.Random(21)
    runs = []
    for _ in range(60):
        prog = random_program(rng, procs=rng.randrange(1, 4), fields=rng.randrange(0, 3))
        runs.extend((prog, abstract_run(prog, seed)) for seed in range(3))
    return runs


def test_abstract_identities_stay_below_twice_the_bound(random_runs):
    for _, visited in random_runs:
        heaps = [c.current for c in visited]
        k = max(visible_size(h) for h in heaps)
        largest = max((n for h in heaps for n in all_reachable(h) if n is not BOT), default=0)
        assert largest <= 2 * k


def test_abstract_step_is_deterministic(random_runs):
    for prog, visited in random_runs:
        for c in visited[::5]:
            assert set(abstract_step(c, prog)) == set(abstract_step(c, prog))


def test_abstract_new_takes_an_unreachable_identity(random_runs):
    allocations = 0
    for prog, visited in random_runs:
        for c in visited:
            if not isinstance(c.top, New):
                continue
            (successor,) = abstract_step(c, prog)
            n = successor.current.get(c.top.target)

            assert n not in all_reachable(c.current)
            assert all(successor.current.deref(f, n) is BOT for f in successor.current.field_names)
            allocations += 1
    assert allocations > 0
