'''
plot_kl_curves.py

Line chart of KL against modeled cost (or step count), one line per sampler
family, with optional standard-error bars.
'''

import matplotlib.pyplot as plt
import numpy as np

from sampler_toolkit.plot import SVG_METADATA

# ============================================
# Function: Plot KL curves per sampler family
# ============================================
def plot_kl_curves(df, x_col, y_col, group_col, output_path, err_col=None, title=None,
                   log_x=True, log_y=True):
    '''
    Plot one KL curve per group and save as SVG.

    Parameters:
    - df (pd.DataFrame): Result table
    - x_col (str): Horizontal axis column (e.g. 'modeled_cost' or 'N')
    - y_col (str): KL column
    - group_col (str): Column splitting the curves (e.g. 'family')
    - output_path (str): File path to save SVG
    - err_col (str): Optional standard-error column drawn as error bars
    - title (str): Chart title

    Returns:
    - None (saves image)
    '''
    plt.figure(figsize=(8, 5))
    for name, subset in df.groupby(group_col, sort=True):
        subset = subset.sort_values(x_col)
        y = subset[y_col].to_numpy(dtype=float)
        finite = np.isfinite(y) & (y > 0 if log_y else True)
        if not finite.any():
            continue
        x = subset[x_col].to_numpy(dtype=float)[finite]
        if err_col is not None and err_col in subset:
            err = subset[err_col].to_numpy(dtype=float)[finite]
            plt.errorbar(x, y[finite], yerr=err, marker='o', capsize=3, label=str(name))
        else:
            plt.plot(x, y[finite], marker='o', label=str(name))

    if log_x:
        plt.xscale('log')
    if log_y:
        plt.yscale('log')
    plt.xlabel(x_col)
    plt.ylabel(y_col)
    plt.title(title or f'{y_col} vs {x_col}')
    plt.grid(True, linestyle='--', alpha=0.3)
    plt.legend(title=group_col)
    plt.tight_layout()
    plt.savefig(output_path, format='svg', metadata=SVG_METADATA)
    plt.close()
