export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function formatAge(days: number): string {
  if (days < 1) return "today";
  if (days < 60) return `${Math.round(days)}d`;
  if (days < 730) return `${Math.round(days / 30.44)}mo`;
  return `${(days / 365.25).toFixed(1)}y`;
}

export function formatKarma(karma: number): string {
  if (karma >= 10_000) return `${(karma / 1000).toFixed(1)}k`;
  return String(karma);
}

export function formatTimestamp(utcSeconds: number): string {
  return new Date(utcSeconds * 1000).toISOString().slice(0, 10);
}

/** "highly_desirable" -> "Highly desirable" for cue chip labels. */
export function categoryLabel(token: string): string {
  const words = token.split("_").join(" ");
  return words.charAt(0).toUpperCase() + words.slice(1);
}
