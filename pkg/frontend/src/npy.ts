/**
 * Minimal NPY v1.0 writer for the one layout the core ingests:
 * a C-order 2-D little-endian float64 matrix.
 *
 * The doubles are written bit-for-bit, so a value survives the trip
 * JS number -> file -> core exactly; this is what makes bit-level parity
 * with the core achievable at all.
 */

const MAGIC = Buffer.from("\x93NUMPY", "latin1");

/** A rectangular row-major matrix of finite or non-finite doubles. */
export type Matrix = ReadonlyArray<ReadonlyArray<number>>;

/**
 * Validate that `values` is a nonempty rectangular 2-D number matrix.
 * Throws with the argument name and the expected shape spelled out.
 */
export function assertMatrix(name: string, values: unknown): asserts values is Matrix {
  if (!Array.isArray(values) || values.length === 0 || !Array.isArray(values[0])) {
    throw new Error(`${name} must be a 2-D matrix (an array of equal-length number rows)`);
  }
  const width = (values[0] as unknown[]).length;
  if (width === 0) {
    throw new Error(`${name} must have at least one column`);
  }
  values.forEach((row, index) => {
    if (!Array.isArray(row) || row.length !== width) {
      throw new Error(
        `${name} row ${index} has ${Array.isArray(row) ? row.length : "no"} cells, expected ${width}`
      );
    }
    for (const cell of row) {
      if (typeof cell !== "number") {
        throw new Error(`${name} row ${index} contains a non-number cell`);
      }
    }
  });
}

/** Encode a matrix as the bytes of an NPY v1.0 file. */
export function encodeNpyMatrix(values: Matrix): Buffer {
  const nRows = values.length;
  const nCols = values[0]!.length;
  let header = `{'descr': '<f8', 'fortran_order': False, 'shape': (${nRows}, ${nCols}), }`;
  // pad with spaces so magic + version + length field + header is a
  // multiple of 64 bytes, terminated by a newline (the format's rule)
  const unpadded = MAGIC.length + 2 + 2 + header.length + 1;
  header = header + " ".repeat((64 - (unpadded % 64)) % 64) + "\n";

  const head = Buffer.alloc(MAGIC.length + 4);
  MAGIC.copy(head, 0);
  head[6] = 1;
  head[7] = 0;
  head.writeUInt16LE(header.length, 8);

  const payload = Buffer.alloc(nRows * nCols * 8);
  let offset = 0;
  for (const row of values) {
    for (const cell of row) {
      payload.writeDoubleLE(cell, offset);
      offset += 8;
    }
  }
  return Buffer.concat([head, Buffer.from(header, "latin1"), payload]);
}
