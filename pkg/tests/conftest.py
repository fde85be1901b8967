import os
import sys

import pytest

# Adds the project root to the path
sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from src import config
from src.services.program_parser import load_program, parse_program
from tests.factories import list_heap, read_golden, sec3_heaps


@pytest.fixture
def sec3():
    """H1 (caller), H2 (callee entry), H3 (callee exit), H4 (after return)."""
    return sec3_heaps()


@pytest.fixture
def linked_list():
    return list_heap()


@pytest.fixture
def corpus():
    def load(name: str):
        return load_program(os.path.join(config.CORPUS_DIR, name))
    return load


@pytest.fixture
def program():
    return parse_program


@pytest.fixture
def golden():
    return read_golden
