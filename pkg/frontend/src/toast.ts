// Non-blocking notifications: service errors surface here while the last
// good view stays on screen.

export interface ToastHost {
  show(message: string, kind?: "error" | "info"): void;
}

export function createToastHost(
  parent: HTMLElement,
  autoDismissMs = 4000,
): ToastHost {
  const container = parent.ownerDocument.createElement("div");
  container.className = "toast-container";
  parent.appendChild(container);
  return {
    show(message: string, kind: "error" | "info" = "error") {
      const toast = parent.ownerDocument.createElement("div");
      toast.className = `toast toast-${kind}`;
      toast.setAttribute("role", "status");
      toast.textContent = message;
      container.appendChild(toast);
      setTimeout(() => toast.remove(), autoDismissMs);
    },
  };
}
