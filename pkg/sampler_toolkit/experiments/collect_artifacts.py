'''
collect_artifacts.py

Bookkeeping for one experiment run: every CSV and plot goes through an
ArtifactCollector, which records the relative path and the per-column
operation provenance that end up in the manifest.
'''

from __future__ import annotations

import logging
import os
from dataclasses import dataclass, field

from sampler_toolkit.io.write_result_table import write_result_table

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ArtifactBundle:
    '''Result of run_experiment: output directory, written files and run status.'''
    out_dir: str
    tables: dict
    plots: dict
    manifest: str
    status: str = 'complete'

    def table_path(self, name):
        return os.path.join(self.out_dir, self.tables[name])


@dataclass
class ArtifactCollector:
    out_dir: str
    tables: dict = field(default_factory=dict)
    plots: dict = field(default_factory=dict)
    provenance: dict = field(default_factory=dict)
    written: list = field(default_factory=list)

    def __post_init__(self):
        os.makedirs(self.out_dir, exist_ok=True)

    @property
    def artifacts(self):
        # file paths in write order; a table and a plot can share a name
        return list(self.written)

    def table(self, name, df, provenance):
        '''
        Write df to <name>.csv and record where each column came from.

        provenance maps column -> operation; columns missing from it are
        reported as 'input' (echoed configuration values).
        '''
        filename = f'{name}.csv'
        path = write_result_table(df, os.path.join(self.out_dir, filename))
        self.tables[name] = filename
        self.written.append(filename)
        self.provenance[filename] = {col: provenance.get(col, 'input') for col in df.columns}
        logger.info('Saved %d rows to: %s', len(df), path)
        return df

    def plot(self, name, render, *args, **kwargs):
        '''Render a static SVG with render(*args, output_path=..., **kwargs).'''
        filename = f'{name}.svg'
        render(*args, output_path=os.path.join(self.out_dir, filename), **kwargs)
        self.plots[name] = filename
        self.written.append(filename)
        logger.info('Saved plot to: %s', os.path.join(self.out_dir, filename))
