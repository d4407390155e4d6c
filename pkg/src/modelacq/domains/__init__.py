"""Desk-scale PDDL tasks bundled for tests, scripts and the CLI."""

from importlib import resources

from ..pddl import GroundTask, load_task

TASKS = {
    "blocksworld-4": ("blocksworld.pddl", "blocksworld-4.pddl"),
    "logistics-3": ("logistics.pddl", "logistics-3.pddl"),
    "gripper-2": ("gripper.pddl", "gripper-2.pddl"),
    "rover-1": ("rover.pddl", "rover-1.pddl"),
}


def read(filename: str) -> str:
    return resources.files(__name__).joinpath(filename).read_text(encoding="utf-8")


def texts(name: str):
    dom, prob = TASKS[name]
    return read(dom), read(prob)


def task(name: str) -> GroundTask:
    return load_task(*texts(name))
