'''
plot_variance_trace.py

Per-step variance chart: the true interpolant variance B(t_n) with the FM and
TM sampler variances s_n underneath it.
'''

import matplotlib.pyplot as plt

from sampler_toolkit.plot import SVG_METADATA

# ============================================
# Function: Plot a variance trace
# ============================================
def plot_variance_trace(trace_df, output_path, title=None):
    '''
    Plot B, s_fm and s_tm against t and save as SVG.

    Parameters:
    - trace_df (pd.DataFrame): Output of VarianceTrace.to_frame()
    - output_path (str): File path for saving the image
    - title (str): Chart title

    Returns:
    - None (chart saved to file)
    '''
    plt.figure(figsize=(10, 5))
    plt.plot(trace_df['t'], trace_df['B'], color='green', linestyle='--', label='B(t) (interpolant)')
    plt.plot(trace_df['t'], trace_df['s_fm'], marker='o', color='red', label='s FM')
    if trace_df['s_tm'].notna().any():
        plt.plot(trace_df['t'], trace_df['s_tm'], marker='s', color='blue', label='s TM')

    plt.title(title or 'Variance per outer step')
    plt.xlabel('t')
    plt.ylabel('Variance')
    plt.grid(True, linestyle='--', alpha=0.3)
    plt.legend()
    plt.tight_layout()
    plt.savefig(output_path, format='svg', metadata=SVG_METADATA)
    plt.close()
