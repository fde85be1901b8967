import random
import unittest
import os
import sys

# Add project root to sys.path to ensure correct imports
sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from src import config
from src.heap import dump_lines
from src.services.interpreter import STEP_LIMIT, STUCK, TERMINATED, Interpreter, Scheduler
from src.services.program_parser import load_program, parse_program
from tests.factories import read_golden, sec3_heaps


class TestInterpreter(unittest.TestCase):

    def setUp(self):
        """Loads the corpus programs used by the runs."""
        self.sec3 = load_program(os.path.join(config.CORPUS_DIR, "sec3.shy"))
        self.rec_alloc = load_program(os.path.join(config.CORPUS_DIR, "rec_alloc.shy"))

    def test_abstract_trace_matches_golden(self):
        result = Interpreter(self.sec3, "abstract").run(trace=True)
        expected = read_golden("sec3_abstract_trace.txt").splitlines()

        self.assertEqual(result.outcome, TERMINATED)
        self.assertEqual(result.steps, 9)
        self.assertEqual(result.trace, expected[:9])
        self.assertEqual(dump_lines(result.final.current), expected[10:])

    def test_both_semantics_end_in_the_same_heap(self):
        """
        The concrete run never reuses identities, yet on this program it
        allocates 0, 1, 2 in the same order the abstract run ends up with.
        """
        expected = sec3_heaps()["H4"]
        for semantics in ("concrete", "abstract"):
            with self.subTest(semantics=semantics):
                result = Interpreter(self.sec3, semantics).run()
                self.assertEqual(result.final.current, expected)

    def test_trace_is_off_by_default(self):
        result = Interpreter(self.sec3).run()
        self.assertEqual(result.trace, [])

    def test_step_limit(self):
        result = Interpreter(self.rec_alloc, "abstract").run(steps=10)

        self.assertEqual(result.outcome, STEP_LIMIT)
        self.assertEqual(result.steps, 10)

    def test_null_dereference_is_stuck(self):
        prog = parse_program("globals g; locals ; fields f; proc main { g := nil; g.f := nil }")

        with self.assertLogs("src.services.interpreter", level="WARNING"):
            result = Interpreter(prog).run()

        self.assertEqual(result.outcome, STUCK)
        self.assertEqual(result.steps, 2)
        self.assertEqual(result.stuck_at, "g.f := nil")

    def test_unknown_semantics(self):
        with self.assertRaises(ValueError):
            Interpreter(self.sec3, "symbolic")


class TestScheduler(unittest.TestCase):

    def test_single_option_does_not_draw(self):
        scheduler = Scheduler(4)
        self.assertEqual(scheduler.pick(1), 0)
        self.assertEqual(scheduler.pick(5), random.Random(4).randrange(5))

    def test_same_seed_same_choices(self):
        first, second = Scheduler(9), Scheduler(9)
        self.assertEqual([first.pick(3) for _ in range(20)], [second.pick(3) for _ in range(20)])


if __name__ == '__main__':
    unittest.main()
