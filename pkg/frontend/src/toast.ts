/** Non-blocking notifications; failures must never freeze the editor. */

export function showToast(doc: Document, message: string, ms = 4000): HTMLElement {
  let host = doc.querySelector<HTMLElement>(".toast-host");
  if (!host) {
    host = doc.createElement("div");
    host.className = "toast-host";
    doc.body.appendChild(host);
  }
  const toast = doc.createElement("div");
  toast.className = "toast";
  toast.setAttribute("role", "status");
  toast.textContent = message;
  host.appendChild(toast);
  setTimeout(() => toast.remove(), ms);
  return toast;
}
