# Copyright 2026 The maskq Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import os
import pathlib

import pytest


@pytest.fixture(scope="session")
def source_dir():
    return pathlib.Path(os.environ.get("MASKQ_SOURCE_DIR",
                                       pathlib.Path(__file__).resolve().parents[2]))


@pytest.fixture(scope="session")
def cli():
    path = os.environ.get("MASKQ_CLI")
    if not path:
        pytest.skip("MASKQ_CLI is not set")
    return path


TINY = [
    "env.season_max_days=15", "env.temp_sigma=0", "env.diurnal_sigma=0",
    "env.srad_sigma=0", "env.p_wet=0", "train.episodes=3", "train.batch_size=8",
    "train.learning_rate=1e-3", "train.reward_scale=1e-3", "train.verbose=0",
    "model.d_model=8", "model.layers=1", "model.heads=2", "model.ffn=16",
]
