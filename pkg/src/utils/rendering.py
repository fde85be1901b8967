import hashlib
from typing import Dict, Iterable, List

from src import config
from src.heap import Heap, dump_heap, dump_heap_line
from src.services.checker import BoundExceeded, Holds, ProductControl, Verdict, Violated, WitnessStep
from src.services.pds import Marker

HASH_LENGTH = 8


def control_hash(h: Heap) -> str:
    return hashlib.sha1(dump_heap(h).encode("utf-8")).hexdigest()[:HASH_LENGTH]


def render_control(control) -> str:
    if isinstance(control, ProductControl):
        return f"{render_control(control.base)}:q{control.bstate}"
    if isinstance(control, Marker):
        return str(control)
    return control_hash(control)


def render_symbol(symbol) -> str:
    if isinstance(symbol, Marker):
        return str(symbol)
    if isinstance(symbol, Heap):
        return f"H:{control_hash(symbol)}"
    return f"<{symbol}>"


def render_rule(control, symbol, target, word) -> str:
    pushed = " ".join(render_symbol(s) for s in word)
    line = f"{render_control(control)} {render_symbol(symbol)} -> {render_control(target)}"
    return f"{line} {pushed}" if pushed else line


def render_step(step: WitnessStep) -> str:
    return render_rule(step.control, step.symbol, step.target, step.word)


def _heaps_in(item) -> Iterable[Heap]:
    if isinstance(item, ProductControl):
        item = item.base
    if isinstance(item, Heap):
        yield item


def legend(items: Iterable) -> List[str]:
    """``legend <hash> = <one-line heap dump>`` for every heap among ``items``, sorted by hash."""
    entries: Dict[str, str] = {}
    for item in items:
        for h in _heaps_in(item):
            entries[control_hash(h)] = dump_heap_line(h)
    return [f"legend {key} = {value}" for key, value in sorted(entries.items())]


def verdict_name(verdict: Verdict) -> str:
    if isinstance(verdict, Holds):
        return "HOLDS"
    if isinstance(verdict, Violated):
        return "VIOLATED"
    return "BOUND-EXCEEDED"


def verdict_exit_code(verdict: Verdict) -> int:
    if isinstance(verdict, Holds):
        return config.EXIT_OK
    if isinstance(verdict, Violated):
        return config.EXIT_VIOLATED
    return config.EXIT_BOUND


def render_verdict(verdict: Verdict) -> str:
    lines = [verdict_name(verdict)]
    if isinstance(verdict, Violated):
        lines.append("witness:")
        lines.extend(f"  {render_step(step)}" for step in verdict.stem)
        control, symbol = verdict.loop_head
        lines.append(f"loop-head: {render_control(control)} {render_symbol(symbol)}")
        items = [control, symbol]
        for step in verdict.stem:
            items.extend([step.control, step.symbol, step.target, *step.word])
        lines.extend(legend(items))
    elif isinstance(verdict, BoundExceeded):
        lines.append(f"head: {render_control(verdict.head.control)} {render_symbol(verdict.head.top)}")
        lines.extend(dump_heap(verdict.head.control).splitlines())
    return "\n".join(lines)
