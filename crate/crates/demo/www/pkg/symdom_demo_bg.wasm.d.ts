/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const gromov_product: (a: number, b: number, c: number, d: number) => [number, number];
export const horofunction_heatmap: (a: number, b: number) => [number, number];
export const mobius_grid: (a: number, b: number, c: number, d: number, e: number) => [number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
