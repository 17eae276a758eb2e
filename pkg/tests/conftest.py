from __future__ import annotations

import os
import sys

sys.path.insert(0, os.path.dirname(__file__))

SCENARIO_DIR = os.path.join(os.path.dirname(__file__), os.pardir, "scenarios")


def scenario_path(name: str) -> str:
    return os.path.abspath(os.path.join(SCENARIO_DIR, name))
