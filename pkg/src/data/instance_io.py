"""
Instance and Solution File I/O
Parses pickup-and-delivery benchmark files, writes and validates solution files
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Iterable, List, Optional, Union

from ..core.exceptions import InstanceParseError, SolutionWriteError
from ..model.instance import Instance, build_instance, DEPOT_ID
from ..model.oracle import simulate_route
from ..model.solution import Solution

logger = logging.getLogger(__name__)

ROW_FIELDS = 9


@dataclass
class SolutionFile:
    """Route lists as stored on disk"""
    instance_name: str
    route_count: int
    routes: List[List[int]] = field(default_factory=list)

    def body(self) -> str:
        """Header plus one route per line; also the cooperation payload text"""
        lines = [f"route_count {self.route_count}"]
        lines.extend(" ".join(str(v) for v in route) for route in self.routes)
        return "\n".join(lines) + "\n"

    def to_text(self) -> str:
        text = self.body()
        if self.instance_name:
            text += f"# instance {self.instance_name}\n"
        return text


@dataclass
class ValidationVerdict:
    accepted: bool
    violations: List[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.accepted


def _parse_ints(line: str, expected: int, line_number: int, source: Optional[str]) -> List[int]:
    parts = line.split()
    if len(parts) != expected:
        raise InstanceParseError(line_number, f"expected {expected} fields, found {len(parts)}", source)
    try:
        return [int(p) for p in parts]
    except ValueError:
        raise InstanceParseError(line_number, f"non-integer field in {line.strip()!r}", source)


def parse_instance(stream: Union[IO[str], Iterable[str]], name: str = "unnamed",
                   source: Optional[str] = None) -> Instance:
    """
    Parse the benchmark format: a header line (vehicle count, capacity, speed)
    followed by one nine-field row per point. Pickup rows name their delivery
    in the last field; delivery rows name their pickup in the eighth.
    """
    header = None
    rows = []
    row_line = {}
    for line_number, raw in enumerate(stream, start=1):
        line = raw.strip()
        if not line:
            continue
        if header is None:
            header = _parse_ints(line, 3, line_number, source)
            continue
        row = _parse_ints(line, ROW_FIELDS, line_number, source)
        pid = row[0]
        if pid in row_line:
            raise InstanceParseError(line_number, f"duplicate point id {pid}", source)
        if pid < 0:
            raise InstanceParseError(line_number, f"negative point id {pid}", source)
        row_line[pid] = line_number
        rows.append(row)

    if header is None:
        raise InstanceParseError(1, "empty instance file", source)
    vehicle_count, capacity, speed = header
    if capacity < 0:
        raise InstanceParseError(1, f"negative capacity {capacity}", source)
    if DEPOT_ID not in row_line:
        raise InstanceParseError(2, "missing depot row with id 0", source)

    by_id = {row[0]: row for row in rows}
    for row in rows:
        pid, _, _, demand, early, late, _, pickup_sibling, delivery_sibling = row
        where = row_line[pid]
        if early > late:
            raise InstanceParseError(where, f"point {pid} window [{early}, {late}] is empty", source)
        if pid == DEPOT_ID:
            if demand != 0 or pickup_sibling or delivery_sibling:
                raise InstanceParseError(where, "depot must have zero demand and no siblings", source)
            continue
        if bool(pickup_sibling) == bool(delivery_sibling):
            raise InstanceParseError(
                where, f"point {pid} must name exactly one sibling, got {pickup_sibling} and {delivery_sibling}",
                source)
        partner = delivery_sibling or pickup_sibling
        if partner not in by_id or partner == DEPOT_ID:
            raise InstanceParseError(where, f"point {pid} references missing partner {partner}", source)
        partner_row = by_id[partner]
        if delivery_sibling:
            if partner_row[7] != pid or partner_row[8] != 0:
                raise InstanceParseError(where, f"pickup {pid} and delivery {partner} are not mutually linked",
                                         source)
            if demand <= 0:
                raise InstanceParseError(where, f"pickup {pid} has non-positive demand {demand}", source)
        elif partner_row[8] != pid or partner_row[7] != 0:
            raise InstanceParseError(where, f"delivery {pid} and pickup {partner} are not mutually linked",
                                     source)
        if demand != -partner_row[3]:
            raise InstanceParseError(where, f"point {pid} demand {demand} does not cancel partner {partner}",
                                     source)

    expected_ids = set(range(len(rows)))
    if set(by_id) != expected_ids:
        missing = sorted(expected_ids - set(by_id))
        raise InstanceParseError(len(rows) + 1, f"point ids are not contiguous, missing {missing[:5]}", source)

    inst = build_instance(rows, capacity, name=name, vehicle_count=vehicle_count, speed=float(speed))
    logger.debug(f"Parsed instance {name}: n={inst.n}, capacity={capacity}")
    return inst


def read_instance(path: Union[str, Path]) -> Instance:
    path = Path(path)
    with open(path, "r", encoding="utf-8", newline=None) as handle:
        return parse_instance(handle, name=path.stem, source=str(path))


def to_solution_file(sol: Solution, inst: Instance) -> SolutionFile:
    id_lists = sol.to_id_lists()
    return SolutionFile(inst.name, len(id_lists), id_lists)


def write_solution(sol: Solution, sink: IO[str], inst: Instance) -> SolutionFile:
    """Write a complete solution; unserved requests are refused"""
    missing = sol.unserved_requests(inst)
    if missing:
        raise SolutionWriteError(f"Cannot write solution with unserved requests {missing[:10]}")
    solution_file = to_solution_file(sol, inst)
    sink.write(solution_file.to_text())
    return solution_file


def parse_solution_body(text: str) -> SolutionFile:
    """Parse route lines; accepts the `route_count <k>` and `routes: <k>` headers"""
    name = ""
    count = None
    routes = []
    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            parts = line[1:].split()
            if len(parts) == 2 and parts[0] == "instance":
                name = parts[1]
            continue
        if count is None:
            key, _, value = line.replace(":", " ").partition(" ")
            if key not in ("route_count", "routes"):
                raise InstanceParseError(line_number, f"expected a route count header, found {line!r}")
            try:
                count = int(value.strip())
            except ValueError:
                raise InstanceParseError(line_number, f"bad route count {value.strip()!r}")
            continue
        try:
            routes.append([int(v) for v in line.split()])
        except ValueError:
            raise InstanceParseError(line_number, f"non-integer point id in {line!r}")
    if count is None:
        raise InstanceParseError(1, "missing route count header")
    if count != len(routes):
        raise InstanceParseError(1, f"header announces {count} routes, file lists {len(routes)}")
    return SolutionFile(name, count, routes)


def read_solution(stream: Union[IO[str], str, Path]) -> SolutionFile:
    if isinstance(stream, (str, Path)):
        with open(stream, "r", encoding="utf-8") as handle:
            return parse_solution_body(handle.read())
    return parse_solution_body(stream.read())


def validate_solution(solution_file: SolutionFile, inst: Instance) -> ValidationVerdict:
    """Accept iff every route simulates feasibly and every request is served once on one route"""
    violations = []
    route_of_point = {}
    for idx, route in enumerate(solution_file.routes):
        if not route:
            violations.append(f"route {idx}: empty")
            continue
        for v in route:
            if v in route_of_point:
                violations.append(f"point {v}: appears on routes {route_of_point[v]} and {idx}")
            else:
                route_of_point[v] = idx
        sim = simulate_route(route, inst)
        violations.extend(f"route {idx}: {msg}" for msg in sim.violations)

    for req in inst.requests:
        on_p = route_of_point.get(req.pickup)
        on_d = route_of_point.get(req.delivery)
        if on_p is None and on_d is None:
            violations.append(f"request {req.id}: not served")
        elif on_p is None or on_d is None:
            violations.append(f"request {req.id}: only one of pickup {req.pickup} and delivery {req.delivery} served")
        elif on_p != on_d:
            violations.append(
                f"request {req.id}: pickup {req.pickup} on route {on_p} but delivery {req.delivery} on route {on_d}")

    if solution_file.route_count != len(solution_file.routes):
        violations.append(
            f"header announces {solution_file.route_count} routes, file lists {len(solution_file.routes)}")
    return ValidationVerdict(not violations, violations)
