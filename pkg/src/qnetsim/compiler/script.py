"""Protocol scripts: the instruction stream the compiler consumes.

A script is a causally ordered global list of instructions across all
nodes.  Conditions are written as (node, address) references to a
measured local unit, never as raw circuit register indices.
"""

from __future__ import annotations

import json
from dataclasses import dataclass


@dataclass(frozen=True)
class LocalOp:
    node: str
    name: str
    addr: object  # int or (addr0, addr1) with control first
    params: tuple | None = None
    cond: tuple | None = None  # (node, address) of a measured unit

    @property
    def is_double(self):
        return isinstance(self.addr, (tuple, list))


@dataclass(frozen=True)
class Transmit:
    src: str
    dst: str
    addr: int


@dataclass(frozen=True)
class ClassicalSend:
    src: str
    dst: str
    ref: tuple  # (node, address) of the measured unit whose outcome is sent


def dump_script(instructions) -> str:
    objs = []
    for inst in instructions:
        if isinstance(inst, LocalOp):
            objs.append({"kind": "local", "node": inst.node, "name": inst.name,
                         "addr": list(inst.addr) if inst.is_double else inst.addr,
                         "params": list(inst.params) if inst.params else None,
                         "cond": list(inst.cond) if inst.cond else None})
        elif isinstance(inst, Transmit):
            objs.append({"kind": "transmit", "src": inst.src, "dst": inst.dst,
                         "addr": inst.addr})
        elif isinstance(inst, ClassicalSend):
            objs.append({"kind": "classical", "src": inst.src, "dst": inst.dst,
                         "ref": list(inst.ref)})
        else:
            raise TypeError(f"not a protocol instruction: {inst!r}")
    return json.dumps(objs, indent=2)


def load_script(text: str) -> list:
    instructions = []
    for obj in json.loads(text):
        kind = obj["kind"]
        if kind == "local":
            addr = obj["addr"]
            instructions.append(LocalOp(
                node=obj["node"], name=obj["name"],
                addr=tuple(addr) if isinstance(addr, list) else addr,
                params=tuple(obj["params"]) if obj.get("params") else None,
                cond=tuple(obj["cond"]) if obj.get("cond") else None))
        elif kind == "transmit":
            instructions.append(Transmit(obj["src"], obj["dst"], obj["addr"]))
        elif kind == "classical":
            instructions.append(ClassicalSend(obj["src"], obj["dst"], tuple(obj["ref"])))
        else:
            raise ValueError(f"unknown instruction kind {kind!r}")
    return instructions
