/* tslint:disable */
/* eslint-disable */

/**
 * Strain along the fiber tangent for an L-shaped fiber in a pulled plate.
 */
export class PlateTrace {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    /**
     * `P : ε_nf`.
     */
    no_fiber(): Float64Array;
    /**
     * `P : ε_f` from the solve with the fiber stretching term.
     */
    recovered(): Float64Array;
    /**
     * Arc length along the fiber, mm.
     */
    s(): Float64Array;
    /**
     * True when the fiber is not stiffer than the matrix and no fiber solve ran.
     */
    skipped(): boolean;
    /**
     * `P : (T : ε_nf)`; equal to `no_fiber` since the fiber row of T is the identity.
     */
    transferred(): Float64Array;
}

export function fiberModulus(): number;

export function modulusCurve(preset: string, samples: number): Float64Array;

export function plateTrace(fiber_modulus: number, pull: number, bend_cell: number): PlateTrace;

/**
 * 36 Mandel entries, row major. Angles in radians.
 */
export function transferMatrix(preset: string, alpha: number, beta: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_platetrace_free: (a: number, b: number) => void;
    readonly fiberModulus: () => number;
    readonly modulusCurve: (a: number, b: number, c: number) => [number, number, number, number];
    readonly plateTrace: (a: number, b: number, c: number) => [number, number, number];
    readonly platetrace_no_fiber: (a: number) => [number, number];
    readonly platetrace_recovered: (a: number) => [number, number];
    readonly platetrace_s: (a: number) => [number, number];
    readonly platetrace_skipped: (a: number) => number;
    readonly platetrace_transferred: (a: number) => [number, number];
    readonly transferMatrix: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
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
