'''
plot_sample_scatter.py

2D scatter of generated samples colour-coded by sampler, with the target
component means marked.
'''

import matplotlib.pyplot as plt

from sampler_toolkit.plot import SVG_METADATA

# ============================================
# Function: Plot generated samples
# ============================================
def plot_sample_scatter(df, output_path, means=None, title=None):
    '''
    Plot (x, y) sample locations grouped by sampler.

    Parameters:
    - df (pd.DataFrame): Must contain 'x', 'y' and 'sampler' columns
    - output_path (str): File path to save SVG
    - means (np.ndarray): Optional (K, 2) target means to mark

    Returns:
    - None (saves image)
    '''
    plt.figure(figsize=(8, 6))
    for sampler in df['sampler'].unique():
        subset = df[df['sampler'] == sampler]
        plt.scatter(subset['x'], subset['y'], label=sampler, alpha=0.4, s=6)

    if means is not None:
        plt.scatter(means[:, 0], means[:, 1], marker='x', color='black', s=80, label='target means')

    plt.xlabel('x1')
    plt.ylabel('x2')
    plt.title(title or 'Generated samples')
    plt.grid(True, linestyle='--', alpha=0.3)
    plt.legend(title='Sampler')
    plt.tight_layout()
    plt.savefig(output_path, format='svg', metadata=SVG_METADATA)
    plt.close()
