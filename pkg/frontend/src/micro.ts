// Fractional quantities cross SNMP as integer micro-units (value x 1e6).
// The conversion lives here and is used only at the form boundary: the
// gateway always sees integers, the user always sees decimals.

const MICRO = 1_000_000;
const DECIMAL_RE = /^-?\d+(\.\d+)?$/;

export function microToDecimal(micro: number): string {
    return (micro / MICRO).toFixed(6);
}

// null when the text is a valid decimal, else a message for the form
export function validateDecimal(text: string): string | null {
    const trimmed = text.trim();
    if (!DECIMAL_RE.test(trimmed)) {
        return "must be a decimal number";
    }
    const fraction = trimmed.split(".")[1] ?? "";
    if (fraction.length > 6) {
        return "at most 6 decimal places";
    }
    return null;
}

export function decimalToMicro(text: string): number {
    const error = validateDecimal(text);
    if (error !== null) {
        throw new Error(error);
    }
    // parse the halves as integers; multiplying the float invites
    // 0.02 * 1e6 === 20000.000000000004
    const trimmed = text.trim();
    const negative = trimmed.startsWith("-");
    const [whole, fraction = ""] = trimmed.replace("-", "").split(".");
    const micro =
        parseInt(whole, 10) * MICRO + parseInt(fraction.padEnd(6, "0") || "0", 10);
    return negative ? -micro : micro;
}

export function validateInteger(text: string): string | null {
    return /^-?\d+$/.test(text.trim()) ? null : "must be an integer";
}
