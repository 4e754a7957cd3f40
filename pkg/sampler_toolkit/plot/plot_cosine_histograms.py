'''
plot_cosine_histograms.py

Grid of cosine-similarity histograms: one row per geometry, one column per time.
'''

import matplotlib.pyplot as plt

from sampler_toolkit.plot import SVG_METADATA

# ============================================
# Function: Plot cosine-similarity histograms
# ============================================
def plot_cosine_histograms(hist_df, output_path, row_col='geometry'):
    '''
    Render the histogram table as bar panels and save as SVG.

    Parameters:
    - hist_df (pd.DataFrame): Columns t, bin_left, bin_right, count and row_col
    - output_path (str): File path to save SVG
    - row_col (str): Column naming the panel row

    Returns:
    - None (saves image)
    '''
    rows = list(dict.fromkeys(hist_df[row_col]))
    times = sorted(hist_df['t'].unique())
    fig, axes = plt.subplots(len(rows), len(times), figsize=(3 * len(times), 2.5 * len(rows)),
                             squeeze=False, sharex=True)

    for i, row in enumerate(rows):
        for j, t in enumerate(times):
            ax = axes[i][j]
            panel = hist_df[(hist_df[row_col] == row) & (hist_df['t'] == t)]
            ax.bar(panel['bin_left'], panel['count'], width=panel['bin_right'] - panel['bin_left'],
                   align='edge', color='steelblue')
            if i == 0:
                ax.set_title(f't = {t:g}')
            if j == 0:
                ax.set_ylabel(str(row))
            ax.set_xlim(-1, 1)

    for ax in axes[-1]:
        ax.set_xlabel('cosine similarity')
    fig.tight_layout()
    fig.savefig(output_path, format='svg', metadata=SVG_METADATA)
    plt.close(fig)
