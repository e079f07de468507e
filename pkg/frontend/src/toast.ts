// Error toasts; 502-style retryable failures get a Retry button.

import { ServiceError } from "./api.js";

export function showToast(
  root: Document,
  message: string,
  options: { retry?: () => void } = {},
): HTMLElement {
  let container = root.querySelector<HTMLElement>(".toast-container");
  if (!container) {
    container = root.createElement("div");
    container.className = "toast-container";
    root.body.appendChild(container);
  }
  const toast = root.createElement("div");
  toast.className = "toast";
  toast.setAttribute("role", "alert");
  const text = root.createElement("span");
  text.textContent = message;
  toast.appendChild(text);
  if (options.retry) {
    const button = root.createElement("button");
    button.className = "toast-retry";
    button.textContent = "Retry";
    button.addEventListener("click", () => {
      toast.remove();
      options.retry?.();
    });
    toast.appendChild(button);
  }
  const close = root.createElement("button");
  close.className = "toast-close";
  close.textContent = "×";
  close.addEventListener("click", () => toast.remove());
  toast.appendChild(close);
  container.appendChild(toast);
  return toast;
}

export function toastError(root: Document, error: unknown, retry?: () => void): HTMLElement {
  if (error instanceof ServiceError) {
    return showToast(root, `${error.code}: ${error.message}`, {
      retry: error.retryable ? retry : undefined,
    });
  }
  return showToast(root, String(error));
}
