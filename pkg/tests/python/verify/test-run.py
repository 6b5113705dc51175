#! /usr/bin/env python3
import os
import sys
import csv
import json
import filecmp
import tempfile
from subprocess import call

sys.path.append(os.path.join(os.path.dirname(os.path.realpath(__file__)), '..', 'helpers'))
from helpers import cliEnvironment

env = cliEnvironment()
tool = ["python3", "-m", "fockteleport.verify"]
work = tempfile.mkdtemp()


def writeConfig(name, document):
  fileName = os.path.join(work, name)
  with open(fileName, 'w') as f:
    json.dump(document, f)
  return fileName


small = writeConfig('small.json', {
    'Model': {'Dimension': 2, 'Density Values': [1.0, 4.0]},
    'Sweep': {'Contraction Samples': 3},
    'Console Output': {'Verbosity': 'Minimal'}
})
oracle = writeConfig('oracle.json', {'Model': {'Dimension': 2, 'Density Values': [0.5, 2.0]}})
broken = writeConfig('broken.json', {'Model': {'Dimension': 2, 'Densities': [1.0]}})

r = call(tool + ["--help"], env=env)
if r != 0:
  exit(r)

# Unknown configuration keys are rejected before any work
r = call(tool + ["sweep", "--config", broken, "--out", os.path.join(work, 'broken')], env=env)
if r != 2:
  print("Expected exit code 2 for an unknown key, got {0}".format(r))
  exit(1)

for run in ['first', 'second']:
  r = call(tool + ["sweep", "--config", small, "--seed", "5", "--out", os.path.join(work, run)], env=env)
  if r != 0:
    exit(r)

for name in ['sweep.csv', 'lemmas.csv']:
  if not filecmp.cmp(os.path.join(work, 'first', name), os.path.join(work, 'second', name), shallow=False):
    print("{0} differs between two runs with the same seed".format(name))
    exit(1)

with open(os.path.join(work, 'first', 'sweep.csv')) as f:
  rows = list(csv.DictReader(f))
if len(rows) != 3 * 4 * 2:
  print("Expected 24 sweep rows, got {0}".format(len(rows)))
  exit(1)
for row in rows:
  if row['channel'] == 'perfect' and abs(float(row['probability']) - 0.25) > 1e-12:
    print("Perfect probability {0} differs from 1/4".format(row['probability']))
    exit(1)

r = call(tool + ["sweep", "--config", small, "--format", "json", "--out", os.path.join(work, 'json')], env=env)
if r != 0:
  exit(r)
with open(os.path.join(work, 'json', 'sweep.json')) as f:
  if len(json.load(f)) != 24:
    exit(1)

r = call(tool + ["staged", "--config", small, "--n", "1", "--m", "2", "--out", os.path.join(work, 'staged')], env=env)
if r != 0:
  exit(r)

r = call(tool + ["oracle-check", "--config", oracle, "--out", os.path.join(work, 'oracle')], env=env)
if r != 0:
  exit(r)

r = call(tool + ["verify", "--config", small, "--out", os.path.join(work, 'verify')], env=env)
if r != 0:
  exit(r)

exit(0)
