// A1-style address helpers, display only. Row/col are 1-based.

export function columnLetter(col: number): string {
  let letters = "";
  let n = col;
  while (n > 0) {
    n -= 1;
    letters = String.fromCharCode((n % 26) + 65) + letters;
    n = Math.floor(n / 26);
  }
  return letters;
}

export function addrText(row: number, col: number): string {
  return columnLetter(col) + String(row);
}

export function parseAddr(addr: string): { row: number; col: number } {
  const m = /^([A-Z]+)([0-9]+)$/.exec(addr);
  if (!m) throw new Error(`bad address ${addr}`);
  let col = 0;
  for (const ch of m[1]) col = col * 26 + (ch.charCodeAt(0) - 64);
  return { row: parseInt(m[2], 10), col };
}
