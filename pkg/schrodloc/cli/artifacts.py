""" Output artifacts: paths, embedded config hashes, collation """

from __future__ import annotations

import json
import logging
import os
from collections import abc
from typing import Optional

from schrodloc import exc

logger = logging.getLogger(__name__)

HASH_PREFIX = '# config_hash='

# What `report` needs
REPORT_INPUTS = ('stages.csv', 'bounds.csv', 'norms.csv', 'scaling.csv', 'fits.json',
                 'search.json', 'certificates.json', 'limsup.json')


def artifact_path(out: str, name: str) -> str:
    return os.path.join(out, name)


def write_text(out: str, name: str, text: str) -> str:
    """ Write an artifact; returns its path """
    os.makedirs(out, exist_ok=True)
    path = artifact_path(out, name)
    with open(path, 'w', newline='') as f:
        f.write(text)
    logger.info(f'Wrote {path}')
    return path


def read_hash(path: str) -> Optional[str]:
    """ The config hash embedded in an artifact: the first CSV comment line, or the JSON key """
    with open(path) as f:
        if path.endswith('.json'):
            return json.load(f).get('config_hash')
        first = f.readline()
    return first[len(HASH_PREFIX):].strip() if first.startswith(HASH_PREFIX) else None


def search_artifacts(out: str) -> list[str]:
    """ The search tables present in the output directory, by stage """
    if not os.path.isdir(out):
        return []
    names = [name for name in os.listdir(out) if name.startswith('search_k') and name.endswith('.csv')]
    return sorted(names, key=lambda name: int(name[len('search_k'):-len('.csv')]))


def collate(out: str, names: abc.Iterable[str] = REPORT_INPUTS) -> str:
    """ Check that every artifact exists and that they all share one config hash

    Returns:
        the common config hash

    Raises:
        exc.ArtifactError: missing artifacts, or mixed hashes
    """
    names = list(names) + search_artifacts(out)
    missing = tuple(name for name in names if not os.path.isfile(artifact_path(out, name)))
    if missing or not search_artifacts(out):
        raise exc.ArtifactError(missing=missing or ('search_k*.csv',))

    hashes = {name: read_hash(artifact_path(out, name)) for name in names}
    distinct = sorted({str(h) for h in hashes.values()})
    if len(distinct) != 1 or distinct[0] == 'None':
        raise exc.ArtifactError(hashes=tuple(f'{name}={h}' for name, h in sorted(hashes.items())))
    return distinct[0]
