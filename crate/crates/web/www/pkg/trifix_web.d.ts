/* tslint:disable */
/* eslint-disable */

/**
 * Search report for dimension 4, 8 or 12 up to a small bound.
 */
export function enumerate(dim: number, max_weight: number): string;

/**
 * Example data as a JSON document. `params` holds the family parameters
 * separated by spaces or commas.
 */
export function example(family: string, params: string): string;

/**
 * SVG drawing of the describing multigraph.
 */
export function graph_svg(document: string): string;

/**
 * Constraint report for a JSON document.
 */
export function verify(document: string): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly enumerate: (a: number, b: number) => [number, number, number, number];
    readonly example: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly graph_svg: (a: number, b: number) => [number, number, number, number];
    readonly verify: (a: number, b: number) => [number, number, number, number];
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
