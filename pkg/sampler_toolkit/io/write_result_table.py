'''
write_result_table.py

Write one result table of a run as CSV.

The table goes to <path>.tmp first and is moved into place with os.replace,
so a crashed run never leaves a truncated CSV behind a manifest. UTF-8, header
row, no index and LF line endings: the same table gives the same bytes on every
rerun and platform.
'''

import logging
import os

from sampler_toolkit.errors import DomainError

logger = logging.getLogger(__name__)


def write_result_table(table, path):
    '''
    Atomically write a result table.

    Parameters:
    - table (pd.DataFrame): Rows to write; column names must be unique
      (the manifest keys provenance by column)
    - path (str): Destination .csv; missing parent directories are created

    Returns:
    - str: path
    '''
    duplicated = table.columns[table.columns.duplicated()]
    if len(duplicated):
        raise DomainError(f'{os.path.basename(path)}: duplicate columns {list(duplicated)}')

    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    staging = path + '.tmp'
    try:
        with open(staging, 'w', encoding='utf-8', newline='') as handle:
            table.to_csv(handle, index=False, lineterminator='\n')
        os.replace(staging, path)
    except OSError as e:
        logger.error('Could not write %s: %s', path, e)
        if os.path.exists(staging):
            os.remove(staging)
        raise

    logger.debug('%s: %d rows x %d columns', path, *table.shape)
    return path
