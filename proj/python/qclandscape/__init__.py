# Copyright 2026 The qclandscape Authors. All Rights Reserved.
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#     http://www.apache.org/licenses/LICENSE-2.0
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Quantum control landscape explorer: Python bindings of the C++ core."""

from ._core import (
    Error,
    Problem,
    build_preset,
    climb,
    critical_submanifolds,
    distance,
    evaluate,
    gradient,
    load_system,
    presets,
    propagate,
    random_field,
    run_batch,
    straight_search,
)

__all__ = [
    "Error",
    "Problem",
    "build_preset",
    "climb",
    "critical_submanifolds",
    "distance",
    "evaluate",
    "gradient",
    "load_system",
    "presets",
    "propagate",
    "random_field",
    "run_batch",
    "straight_search",
]
