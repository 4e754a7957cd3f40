'''Static SVG renderings of the result tables. Rendering is headless (Agg).'''

import matplotlib

matplotlib.use('Agg')
# fixed ids and no timestamp, so reruns write identical SVG files
matplotlib.rcParams['svg.hashsalt'] = 'sampler_toolkit'

SVG_METADATA = {'Date': None}
