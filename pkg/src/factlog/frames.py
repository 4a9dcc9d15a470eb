"""Frame inventory: names, roles, role domains, and role metadata.

The registry is knowledge-engineer input, loaded from a plain-text file::

    frame("Commerce_buy",["Buyer","Goods","Recipient","Money"]).
    domain("Commerce_buy","Buyer","person").
    senses("Buyer",["bn:10000001n"]).
    definition("Recipient","A person's name").

``senses`` feed the lexical-graph scorer and ``definition`` lines feed the
sentence-embedding scorer; both are keyed by role name, which the scoring
formulas treat as global.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import terms
from .errors import RuleSyntaxError


@dataclass(frozen=True)
class FrameDef:
    name: str
    roles: tuple[str, ...]
    domains: dict = field(default_factory=dict)  # role -> domain predicate

    def __post_init__(self):
        if len(set(self.roles)) != len(self.roles):
            raise RuleSyntaxError(f"frame {self.name}: duplicate role names")


class FrameRegistry:
    def __init__(self):
        self.frames: dict[str, FrameDef] = {}
        self.role_senses: dict[str, tuple[str, ...]] = {}
        self.role_definitions: dict[str, tuple[str, ...]] = {}

    def add(self, frame: FrameDef) -> None:
        self.frames[frame.name] = frame

    def get(self, name: str) -> FrameDef:
        if name not in self.frames:
            raise RuleSyntaxError(f"unknown frame {name!r}")
        return self.frames[name]

    def domain_of(self, frame: str, role: str) -> str | None:
        f = self.frames.get(frame)
        return f.domains.get(role) if f else None

    @classmethod
    def load(cls, text: str) -> "FrameRegistry":
        reg = cls()
        for line_no, stmt in terms.iter_statements(text):
            term = terms.parse_term(stmt)
            if not isinstance(term, terms.Compound):
                raise RuleSyntaxError(f"line {line_no}: unexpected {stmt!r}")
            if term.functor == "frame":
                name = terms.text_of(term.args[0])
                roles = tuple(
                    terms.text_of(r) for r in term.args[1].items
                )
                reg.add(FrameDef(name=name, roles=roles))
            elif term.functor == "domain":
                frame, role, pred = (terms.text_of(a) for a in term.args)
                reg.get(frame).domains[role] = pred
            elif term.functor == "senses":
                role = terms.text_of(term.args[0])
                reg.role_senses[role] = tuple(
                    terms.text_of(s) for s in term.args[1].items
                )
            elif term.functor == "definition":
                role = terms.text_of(term.args[0])
                reg.role_definitions.setdefault(role, ())
                reg.role_definitions[role] += (terms.text_of(term.args[1]),)
            else:
                raise RuleSyntaxError(
                    f"line {line_no}: unknown record {term.functor!r}"
                )
        return reg

    def dump(self) -> str:
        lines = []
        for f in self.frames.values():
            roles = ",".join(f'"{r}"' for r in f.roles)
            lines.append(f'frame("{f.name}",[{roles}]).')
            for role, pred in sorted(f.domains.items()):
                lines.append(f'domain("{f.name}","{role}",{pred}).')
        for role, senses in sorted(self.role_senses.items()):
            ss = ",".join(f'"{s}"' for s in senses)
            lines.append(f'senses("{role}",[{ss}]).')
        for role, defs in sorted(self.role_definitions.items()):
            for d in defs:
                lines.append(f'definition("{role}","{d}").')
        return "\n".join(lines) + "\n"
