/* tslint:disable */
/* eslint-disable */

/**
 * `[analytic_eer, analytic_threshold, sampled_eer, sampled_threshold, sampled_min_dcf]`
 */
export function eer_explorer(mu_pos: number, sigma_pos: number, mu_neg: number, sigma_neg: number, n_pos: number, n_neg: number, seed: number, p_target: number): Float64Array;

/**
 * C-P map of one sampled Gaussian system ordered by its own scores.
 * `metric` is `"eer"` or `"min_dcf"`.
 */
export function synthetic_cp_map(separation: number, n_pos: number, n_neg: number, seed: number, grid: number, min_trials: number, metric: string, p_target: number): Float64Array;

/**
 * RCR grid of a test system against a reference; the last three entries
 * are the win, tie and lose fractions.
 */
export function synthetic_delta_map(ref_separation: number, test_separation: number, correlation: number, n_pos: number, n_neg: number, seed: number, grid: number, min_trials: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly eer_explorer: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number) => [number, number, number, number];
    readonly synthetic_cp_map: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number, i: number) => [number, number, number, number];
    readonly synthetic_delta_map: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;
