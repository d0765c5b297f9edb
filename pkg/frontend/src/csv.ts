import { ValidationError } from "./errors.js";

export const CSV_HEADER =
  "method,sketch,m,n,d,kappa,beta,trial,wall_time_s," +
  "forward_error,residual_error,iterations,termination";

export interface BenchRecord {
  method: string;
  sketch: string | null;
  m: number;
  n: number;
  d: number | null;
  kappa: number;
  beta: number;
  trial: number;
  wall_time_s: number;
  forward_error: number;
  residual_error: number;
  iterations: number;
  termination: string;
}

export function parseResultsCsv(text: string): BenchRecord[] {
  const lines = text.split("\n").filter((ln) => ln.length > 0);
  if (lines.length === 0 || lines[0] !== CSV_HEADER) {
    throw new ValidationError("unexpected results.csv header");
  }
  return lines.slice(1).map((ln) => {
    const f = ln.split(",");
    if (f.length !== 13) {
      throw new ValidationError(`expected 13 fields, got ${f.length}: ${ln}`);
    }
    return {
      method: f[0],
      sketch: f[1] === "" ? null : f[1],
      m: Number(f[2]),
      n: Number(f[3]),
      d: f[4] === "" ? null : Number(f[4]),
      kappa: Number(f[5]),
      beta: Number(f[6]),
      trial: Number(f[7]),
      wall_time_s: Number(f[8]),
      forward_error: Number(f[9]),
      residual_error: Number(f[10]),
      iterations: Number(f[11]),
      termination: f[12],
    };
  });
}
