"""
This module contains functions for turning results into tables and for reading tabular inputs.

Functions:
- load_data(file_path, columns): Loads data from a CSV file and
returns a DataFrame with specified columns.
- load_samples(file_path): Reads (x, v) samples of a tabulated potential.
- transition_column(channel): Column name T_1n of a coupled channel.
- results_frame(results, channels, oracle=None): One row per energy with
R, T_elastic, every T_1n, the unitarity defect and a status column.
- greens_frame(energies, values): Point Green's function of one channel over a grid.
- max_deviation(results, oracle, channels): Largest |T_1n - T_1n^oracle| per channel.
- write_frame(frame, path_or_buf): Writes a table as CSV with fixed number formatting.
"""

import numpy as np
import pandas as pd

# 12 significant digits keeps the CSV byte-identical across runs
FLOAT_FORMAT = "%.12g"
NA_REP = "nan"


def load_data(file_path, columns):
    """
    Load data from a CSV file and return a DataFrame with specified columns.

    Parameters:
    file_path (str): The path to the CSV file.
    columns (list): A list of column names to be included in the DataFrame.

    Returns:
    pandas.DataFrame: A DataFrame containing the specified columns from the CSV file.
    """
    data_df = pd.read_csv(file_path, usecols=columns)
    return data_df


def load_samples(file_path):
    """
    Read the samples of a tabulated potential from a CSV with columns x and v.

    Args:
        file_path (str | Path): The CSV file.

    Returns:
        tuple: (x, v) pairs in file order.
    """
    data_df = load_data(file_path, ['x', 'v'])
    # Convert both columns to numbers, failing on anything else
    data_df = data_df.apply(pd.to_numeric, errors='raise')
    return tuple(zip(data_df['x'].tolist(), data_df['v'].tolist()))


def transition_column(channel):
    """
    Column name of the transition probability into a coupled channel.

    Example:
        >>> transition_column(3)
        'T_13'
    """
    return f"T_1{channel}"


def results_frame(results, channels, oracle=None):
    """
    Create the results table of an energy sweep.

    Args:
        results (list): TransitionResult objects in grid order.
        channels (list): Coupled channel indices, fixing the column order.
        oracle (list, optional): Oracle results on the same grid; adds
        oracle_T_1n columns.

    Returns:
        pandas.DataFrame: Columns E, R, T_elastic, T_1n..., defect,
        [oracle_T_1n...,] status.
    """
    rows = []
    for i, result in enumerate(results):
        row = {'E': result.energy, 'R': result.R, 'T_elastic': result.T_elastic}
        for channel in channels:
            row[transition_column(channel)] = result.T_1n.get(channel, np.nan)
        row['defect'] = result.unitarity_defect
        if oracle is not None:
            for channel in channels:
                row['oracle_' + transition_column(channel)] = oracle[i].T_1n.get(channel, np.nan)
        row['status'] = result.status
        rows.append(row)
    columns = ['E', 'R', 'T_elastic'] + [transition_column(n) for n in channels] + ['defect']
    if oracle is not None:
        columns += ['oracle_' + transition_column(n) for n in channels]
    columns.append('status')
    return pd.DataFrame(rows, columns=columns)


def greens_frame(energies, values):
    """
    Create the table of a point Green's function over an energy grid.

    Args:
        energies (list): The energies.
        values (list): GreensPointValue for each energy, or a string naming
        why that energy failed ("threshold", "pole", "failed").

    Returns:
        pandas.DataFrame: Columns E, re_G, im_G, openness.
    """
    rows = []
    for energy, value in zip(energies, values):
        if isinstance(value, str):
            rows.append({'E': energy, 're_G': np.nan, 'im_G': np.nan, 'openness': value})
        else:
            rows.append({'E': energy, 're_G': value.value.real, 'im_G': value.value.imag,
                         'openness': value.openness})
    return pd.DataFrame(rows, columns=['E', 're_G', 'im_G', 'openness'])


def max_deviation(results, oracle, channels):
    """
    Largest absolute difference between pipeline and oracle T_1n per channel.

    Points where either side is nan are left out.

    Args:
        results (list): Pipeline TransitionResult objects.
        oracle (list): Oracle TransitionResult objects on the same grid.
        channels (list): Coupled channel indices.

    Returns:
        dict: Channel index to max |dT_1n| (nan if no point is comparable).
    """
    deviations = {}
    for channel in channels:
        diffs = np.array([abs(r.T_1n.get(channel, np.nan) - o.T_1n.get(channel, np.nan))
                          for r, o in zip(results, oracle)], dtype=float)
        diffs = diffs[~np.isnan(diffs)]
        deviations[channel] = float(diffs.max()) if diffs.size else np.nan
    return deviations


def write_frame(frame, path_or_buf):
    """
    Write a table as CSV with fixed formatting.

    Args:
        frame (pandas.DataFrame): The table.
        path_or_buf (str | Path | file): Destination.
    """
    frame.to_csv(path_or_buf, index=False, float_format=FLOAT_FORMAT, na_rep=NA_REP,
                 lineterminator="\n")
