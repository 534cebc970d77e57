/* tslint:disable */
/* eslint-disable */

/**
 * A generated graph plus the most recent outbreak on it.
 */
export class Demo {
    free(): void;
    [Symbol.dispose](): void;
    /**
     * `{nodes, edges}` for drawing.
     */
    graph(): string;
    /**
     * Estimates the sources of the last outbreak with `algorithm` (OJC, AJC,
     * DC or CC) and scores the estimate against the truth.
     */
    localize(algorithm: string, threshold: number, restarts: number, seed: number): string;
    /**
     * Random graph with `n` nodes, each pair joined with probability `p`.
     */
    constructor(n: number, p: number, seed: number);
    /**
     * Runs `t` slots of SI diffusion from `m` random sources and samples
     * which infected nodes report.
     */
    simulate(q: number, theta: number, m: number, t: number, seed: number): string;
}

/**
 * Asymptotic quantities for an ER graph with `n` nodes and edge
 * probability `p`.
 */
export function theory(n: number, p: number, q: number, theta: number, y: number): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_demo_free: (a: number, b: number) => void;
    readonly demo_graph: (a: number) => [number, number];
    readonly demo_localize: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
    readonly demo_new: (a: number, b: number, c: number) => [number, number, number];
    readonly demo_simulate: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
    readonly theory: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly __externref_table_alloc: () => number;
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __externref_table_dealloc: (a: number) => void;
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
