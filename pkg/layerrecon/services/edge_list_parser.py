"""
Edge-List Parser Service
Parse the canonical multiplex edge-list format into typed records.

Format: UTF-8 text, one edge per line as `layer_id source target [weight]`,
whitespace-separated. `#` starts a comment; blank lines are ignored. A line
`#! nodes <label> ...` declares node labels up front, in order, and
`#! layers <layer_id> ...` does the same for layers; together they keep
isolated nodes, empty layers and ordering stable across a write/load cycle.
"""

import math
from dataclasses import dataclass, field
from typing import Iterable, List, Optional

from layerrecon.core.exceptions import ParseError


@dataclass(frozen=True)
class EdgeRecord:
    """One parsed edge line."""
    line_number: int
    layer_id: str
    source: str
    target: str
    weight: float


@dataclass
class ParsedEdgeList:
    """Declared nodes and layers (possibly empty) plus edge records in file order."""
    declared_nodes: List[str] = field(default_factory=list)
    declared_layers: List[str] = field(default_factory=list)
    edges: List[EdgeRecord] = field(default_factory=list)


class EdgeListParser:
    """Parse multiplex edge lists, failing loudly with the offending line number."""

    COMMENT = "#"
    NODE_PRAGMA = "#! nodes"
    LAYER_PRAGMA = "#! layers"
    ENCODING = "utf-8"

    @classmethod
    def parse_file(cls, file_path: str) -> ParsedEdgeList:
        """
        Parse an edge-list file.

        Args:
            file_path: Path to the edge list

        Returns:
            Declared nodes and edge records in file order
        """
        with open(file_path, "r", encoding=cls.ENCODING) as fh:
            return cls.parse_lines(fh, path=file_path)

    @classmethod
    def parse_text(cls, text: str) -> ParsedEdgeList:
        """Parse edge-list content held in memory."""
        return cls.parse_lines(text.splitlines())

    @classmethod
    def parse_lines(cls, lines: Iterable[str], path: Optional[str] = None) -> ParsedEdgeList:
        parsed = ParsedEdgeList()
        for line_number, raw in enumerate(lines, start=1):
            stripped = raw.strip()
            if stripped.startswith(cls.NODE_PRAGMA):
                for label in stripped[len(cls.NODE_PRAGMA):].split():
                    if label in parsed.declared_nodes:
                        raise ParseError(f"node {label!r} declared twice", line_number, path)
                    parsed.declared_nodes.append(label)
                continue
            if stripped.startswith(cls.LAYER_PRAGMA):
                parsed.declared_layers.extend(stripped[len(cls.LAYER_PRAGMA):].split())
                continue
            line = stripped.split(cls.COMMENT, 1)[0].strip()
            if not line:
                continue
            parsed.edges.append(cls._parse_line(line, line_number, path))
        return parsed

    @staticmethod
    def _parse_line(line: str, line_number: int, path: Optional[str]) -> EdgeRecord:
        fields = line.split()
        if len(fields) not in (3, 4):
            raise ParseError(
                f"expected 'layer_id source target [weight]', got {len(fields)} fields",
                line_number, path,
            )
        layer_id, source, target = fields[:3]
        weight = 1.0
        if len(fields) == 4:
            try:
                weight = float(fields[3])
            except ValueError:
                raise ParseError(f"non-numeric weight '{fields[3]}'", line_number, path) from None
            if not math.isfinite(weight):
                raise ParseError(f"non-finite weight '{fields[3]}'", line_number, path)
            if weight < 0:
                raise ParseError(f"negative weight {weight}", line_number, path)
        if source == target:
            raise ParseError(f"self-loop on node '{source}' rejected", line_number, path)
        return EdgeRecord(line_number, layer_id, source, target, weight)
